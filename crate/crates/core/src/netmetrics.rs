//! Supply-side collaboration graph with closeness centrality, and the
//! demand-side commenter/channel graph with per-commenter Shannon entropy.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::collab::CollaborationDyad;
use crate::corpus::{ChannelId, ChannelRecord, CommentRecord, VideoRecord};

/// Undirected creator graph. Node order is the registry order; edge weight
/// is the number of collaboration videos in either direction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CollabGraph {
    nodes: Vec<ChannelId>,
    index: BTreeMap<ChannelId, usize>,
    adjacency: Vec<BTreeSet<usize>>,
    weights: BTreeMap<(usize, usize), u32>,
}

impl CollabGraph {
    pub fn with_nodes(nodes: impl IntoIterator<Item = ChannelId>) -> Self {
        let mut g = Self::default();
        for id in nodes {
            if !g.index.contains_key(&id) {
                g.index.insert(id.clone(), g.nodes.len());
                g.nodes.push(id);
                g.adjacency.push(BTreeSet::new());
            }
        }
        g
    }

    /// Adds `weight` to edge `{a, b}`. Self-loops and unknown nodes are ignored.
    pub fn add_edge(&mut self, a: &str, b: &str, weight: u32) -> bool {
        let (Some(&i), Some(&j)) = (self.index.get(a), self.index.get(b)) else {
            return false;
        };
        if i == j || weight == 0 {
            return false;
        }
        let key = (i.min(j), i.max(j));
        *self.weights.entry(key).or_insert(0) += weight;
        self.adjacency[i].insert(j);
        self.adjacency[j].insert(i);
        true
    }

    pub fn nodes(&self) -> &[ChannelId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<u32> {
        let (i, j) = (*self.index.get(a)?, *self.index.get(b)?);
        self.weights.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn degree(&self, id: &str) -> Option<usize> {
        self.index.get(id).map(|&i| self.adjacency[i].len())
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().copied()
    }

    /// `(a, b, weight)` with `a < b` by node index.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.weights.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Every registry channel becomes a node; `(A, B)` and `(B, A)` fold into one
/// edge whose weight sums their video counts.
pub fn build_collab_graph(registry: &[ChannelRecord], dyads: &[CollaborationDyad]) -> CollabGraph {
    let mut g = CollabGraph::with_nodes(registry.iter().map(|c| c.channel_id.clone()));
    for d in dyads {
        if !g.add_edge(&d.host, &d.guest, d.videos.len() as u32) {
            log::warn!("dyad {}->{} not added to the collaboration graph", d.host, d.guest);
        }
    }
    g
}

/// How disconnected graphs are scored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosenessConvention {
    /// `((k-1)/(n-1)) * ((k-1)/sum d)` over the node's component of size `k`;
    /// isolated nodes score 0.
    #[default]
    ComponentScaled,
    /// `(k-1)/sum d` inside the largest component only; other nodes are
    /// left out of the result.
    LargestComponent,
}

/// Unweighted closeness with the default component-scaled convention.
pub fn closeness(graph: &CollabGraph) -> BTreeMap<ChannelId, f64> {
    closeness_with(graph, ClosenessConvention::ComponentScaled)
}

pub fn closeness_with(graph: &CollabGraph, convention: ClosenessConvention) -> BTreeMap<ChannelId, f64> {
    let n = graph.node_count();
    let largest = match convention {
        ClosenessConvention::ComponentScaled => None,
        ClosenessConvention::LargestComponent => Some(largest_component(graph)),
    };
    let mut out = BTreeMap::new();
    for source in 0..n {
        if let Some(comp) = &largest {
            if !comp.contains(&source) {
                continue;
            }
        }
        let dist = graph.bfs(source);
        let (reached, total) = dist
            .iter()
            .flatten()
            .fold((0u64, 0u64), |(k, s), &d| (k + 1, s + d as u64));
        let value = if reached <= 1 || total == 0 {
            0.0
        } else {
            let k1 = reached - 1;
            match convention {
                ClosenessConvention::ComponentScaled => (k1 * k1) as f64 / ((n as u64 - 1) * total) as f64,
                ClosenessConvention::LargestComponent => k1 as f64 / total as f64,
            }
        };
        out.insert(graph.nodes[source].clone(), value);
    }
    out
}

fn largest_component(graph: &CollabGraph) -> BTreeSet<usize> {
    let mut seen = vec![false; graph.node_count()];
    let mut best = BTreeSet::new();
    for start in 0..graph.node_count() {
        if seen[start] {
            continue;
        }
        let comp: BTreeSet<usize> = graph
            .bfs(start)
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|_| i))
            .collect();
        for &i in &comp {
            seen[i] = true;
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

/// Sorted sample with its median.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub values: Vec<f64>,
    pub median: f64,
}

impl Distribution {
    pub fn new(mut values: Vec<f64>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        let median = quantile_sorted(&values, 0.5);
        Some(Self { values, median })
    }

    /// Linear interpolation between closest ranks.
    pub fn quantile(&self, q: f64) -> f64 {
        quantile_sorted(&self.values, q)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

fn quantile_sorted(values: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (values.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = libm::ceil(pos) as usize;
    if lo == hi {
        values[lo]
    } else {
        let frac = pos - lo as f64;
        values[lo] + (values[hi] - values[lo]) * frac
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralitySummary {
    pub per_channel: BTreeMap<ChannelId, f64>,
    pub per_attribute: BTreeMap<String, Distribution>,
}

impl CentralitySummary {
    /// Groups closeness values by a registry attribute; channels lacking the
    /// attribute fall under `"unknown"`.
    pub fn new(per_channel: BTreeMap<ChannelId, f64>, registry: &[ChannelRecord], attribute_key: &str) -> Self {
        let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for c in registry {
            if let Some(&v) = per_channel.get(&c.channel_id) {
                let label = c.attribute(attribute_key).unwrap_or("unknown").to_string();
                groups.entry(label).or_default().push(v);
            }
        }
        let per_attribute = groups.into_iter().filter_map(|(k, v)| Distribution::new(v).map(|d| (k, d))).collect();
        Self { per_channel, per_attribute }
    }
}

/// Commenter -> channel -> number of comments.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AttentionGraph {
    pub weights: BTreeMap<String, BTreeMap<ChannelId, u64>>,
}

impl AttentionGraph {
    /// Counts raw comments. Comments on unknown videos are ignored.
    pub fn build(comments: &[CommentRecord], videos: &[VideoRecord]) -> Self {
        let owner: BTreeMap<&str, &str> = videos.iter().map(|v| (v.video_id.as_str(), v.channel_id.as_str())).collect();
        let mut g = Self::default();
        for c in comments {
            if let Some(ch) = owner.get(c.video_id.as_str()) {
                *g.weights.entry(c.author_id.clone()).or_default().entry(ch.to_string()).or_insert(0) += 1;
            }
        }
        g
    }

    pub fn commenter_count(&self) -> usize {
        self.weights.len()
    }
}

/// Shannon entropy in bits of a weight vector. Weights are sorted first, so
/// the result is bit-identical under any permutation of the input.
pub fn shannon_entropy(weights: &[u64]) -> f64 {
    let mut sorted: Vec<u64> = weights.iter().copied().filter(|&w| w > 0).collect();
    sorted.sort_unstable();
    let total: u64 = sorted.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h = sorted.iter().fold(0.0, |acc, &w| {
        let p = w as f64 / total;
        acc - p * libm::log2(p)
    });
    // a single channel gives -1*log2(1) = -0.0
    if h == 0.0 { 0.0 } else { h }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommenterEntropy {
    pub comments: u64,
    pub channels: usize,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EntropyDistribution {
    pub per_commenter: BTreeMap<String, CommenterEntropy>,
    /// All entropies, ascending.
    pub sorted: Vec<f64>,
}

impl EntropyDistribution {
    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.sorted.last().copied()
    }

    pub fn mean(&self) -> Option<f64> {
        (!self.sorted.is_empty()).then(|| self.sorted.iter().sum::<f64>() / self.sorted.len() as f64)
    }

    /// Fraction of commenters with entropy `<= threshold`.
    pub fn cdf_at(&self, threshold: f64) -> f64 {
        let count = self.sorted.partition_point(|&h| h <= threshold);
        count as f64 / self.sorted.len() as f64
    }

    /// One point per distinct entropy value; the last point is 1 at the max.
    pub fn empirical_cdf(&self) -> Vec<CdfPoint> {
        let n = self.sorted.len() as f64;
        let mut points: Vec<CdfPoint> = Vec::new();
        for (i, &h) in self.sorted.iter().enumerate() {
            let fraction = (i + 1) as f64 / n;
            match points.last_mut() {
                Some(last) if last.threshold == h => last.fraction = fraction,
                _ => points.push(CdfPoint { threshold: h, fraction }),
            }
        }
        points
    }
}

/// Entropy of every commenter with at least `min_comments` comments
/// (0 keeps everyone).
pub fn commenter_entropy(attention: &AttentionGraph, min_comments: u64) -> EntropyDistribution {
    let mut dist = EntropyDistribution::default();
    for (author, channels) in &attention.weights {
        let weights: Vec<u64> = channels.values().copied().collect();
        let comments: u64 = weights.iter().sum();
        if comments < min_comments {
            continue;
        }
        let entropy = shannon_entropy(&weights);
        dist.sorted.push(entropy);
        dist.per_commenter.insert(author.clone(), CommenterEntropy { comments, channels: weights.len(), entropy });
    }
    dist.sorted.sort_by(f64::total_cmp);
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub threshold: f64,
    pub fraction: f64,
}

/// CDF evaluated on `grid`. An empty distribution yields no points.
pub fn entropy_cdf(dist: &EntropyDistribution, grid: &[f64]) -> Vec<CdfPoint> {
    if dist.is_empty() {
        log::warn!("entropy distribution is empty; CDF has no points");
        return Vec::new();
    }
    grid.iter().map(|&t| CdfPoint { threshold: t, fraction: dist.cdf_at(t) }).collect()
}

/// `0, step, 2*step, ...` up to the first multiple `>= max`.
pub fn uniform_grid(max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "grid step must be positive");
    let count = libm::ceil(max.max(0.0) / step) as usize;
    (0..=count).map(|i| i as f64 * step).collect()
}
