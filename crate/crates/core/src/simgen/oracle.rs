//! Naive recomputation of pipeline outputs from planted truth and raw rows.
//!
//! Nothing here calls the pipeline's own helpers: medians use a full sort,
//! distances use Floyd-Warshall and entropies count comments in plain loops.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::PlantedTruth;
use crate::collab::{detect_collaborations, CollabDetection, CollabError};
use crate::corpus::{Baselines, Corpus};
use crate::netmetrics::{build_collab_graph, closeness, commenter_entropy, AttentionGraph, EntropyDistribution};
use crate::synergy::{compute_synergies, SynergyRun};
use crate::Rational;

const FLOAT_TOLERANCE: f64 = 1e-9;

/// The metrics the oracle checks, as produced by the pipeline.
#[derive(Debug, Clone)]
pub struct PipelineOutputs {
    pub detection: CollabDetection,
    pub baselines: Baselines,
    pub synergy: SynergyRun,
    pub entropy: EntropyDistribution,
    pub closeness: BTreeMap<String, f64>,
}

impl PipelineOutputs {
    pub fn compute(corpus: &Corpus, attribute_key: &str) -> Result<Self, CollabError> {
        let detection = detect_collaborations(corpus, attribute_key)?;
        let baselines = Baselines::compute(&corpus.registry, &corpus.videos, &detection.collaboration_videos());
        let synergy = compute_synergies(&detection.dyads, &corpus.videos, &baselines);
        let entropy = commenter_entropy(&AttentionGraph::build(&corpus.comments, &corpus.videos), 0);
        let closeness = closeness(&build_collab_graph(&corpus.registry, &detection.dyads));
        Ok(Self { detection, baselines, synergy, entropy, closeness })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub metric: String,
    pub subject: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check<T: PartialEq + core::fmt::Debug>(&mut self, metric: &str, subject: &str, expected: T, actual: T) {
        self.checked += 1;
        if expected != actual {
            self.fail(metric, subject, format!("{expected:?}"), format!("{actual:?}"));
        }
    }

    fn check_close(&mut self, metric: &str, subject: &str, expected: f64, actual: Option<f64>) {
        self.checked += 1;
        match actual {
            Some(a) if libm::fabs(a - expected) <= FLOAT_TOLERANCE => {}
            other => self.fail(metric, subject, format!("{expected}"), format!("{other:?}")),
        }
    }

    fn fail(&mut self, metric: &str, subject: &str, expected: String, actual: String) {
        self.mismatches.push(Mismatch { metric: metric.into(), subject: subject.into(), expected, actual });
    }
}

fn naive_median(mut xs: Vec<u64>) -> Option<Rational> {
    // insertion sort keeps this independent of the library sort
    for i in 1..xs.len() {
        let mut j = i;
        while j > 0 && xs[j - 1] > xs[j] {
            xs.swap(j - 1, j);
            j -= 1;
        }
    }
    let n = xs.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(Rational::from_integer(xs[n / 2] as i128)),
        _ => Some(Rational::new(xs[n / 2 - 1] as i128 + xs[n / 2] as i128, 2)),
    }
}

fn naive_entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * libm::log(p) / core::f64::consts::LN_2;
        }
    }
    h
}

fn floyd_warshall_closeness(nodes: &[String], edges: &BTreeSet<(usize, usize)>) -> Vec<f64> {
    let n = nodes.len();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let reach: Vec<u64> = (0..n).filter(|&j| j != i && d[i][j] < inf).map(|j| d[i][j]).collect();
            if reach.is_empty() {
                0.0
            } else {
                let r = reach.len() as f64;
                let sum: u64 = reach.iter().sum();
                (r / (n - 1) as f64) * (r / sum as f64)
            }
        })
        .collect()
}

/// Compares pipeline outputs with values rebuilt from `truth` and the raw
/// rows of `corpus`.
pub fn compare_outputs(corpus: &Corpus, truth: &PlantedTruth, outputs: &PipelineOutputs) -> VerificationReport {
    let mut report = VerificationReport::default();

    // dyad structure
    let planted: Vec<(String, String, Vec<String>, String)> = truth
        .dyads
        .iter()
        .map(|d| (d.host.clone(), d.guest.clone(), d.videos.clone(), d.dyad_type.clone()))
        .collect();
    let detected: Vec<(String, String, Vec<String>, String)> = outputs
        .detection
        .dyads
        .iter()
        .map(|d| (d.host.clone(), d.guest.clone(), d.videos.clone(), d.dyad_type.clone()))
        .collect();
    report.check("dyads", "count", planted.len(), detected.len());
    for p in &planted {
        let subject = format!("{}->{}", p.0, p.1);
        let found = detected.iter().find(|d| d.0 == p.0 && d.1 == p.1).cloned();
        report.check("dyad", &subject, Some(p.clone()), found);
    }
    report.check("two_way_videos", &truth.community, truth.two_way_videos, outputs.detection.stats.two_way_videos);
    report.check("multi_way_videos", &truth.community, &truth.multi_way_videos, &outputs.detection.multi_way_videos);
    report.check("total_videos", &truth.community, corpus.videos.len(), outputs.detection.stats.total_videos);

    // baselines
    let collab = truth.collaboration_videos();
    let mut expected_baseline: BTreeMap<&str, Rational> = BTreeMap::new();
    for ch in &corpus.registry {
        let mut views = Vec::new();
        for v in &corpus.videos {
            if v.channel_id == ch.channel_id && !collab.contains(&v.video_id) {
                views.push(v.view_count);
            }
        }
        let expected = naive_median(views);
        report.check("baseline", &ch.channel_id, expected, outputs.baselines.get(&ch.channel_id).ok());
        if let Some(m) = expected {
            expected_baseline.insert(ch.channel_id.as_str(), m);
        }
    }

    // synergy values straight from the definitions
    let views: BTreeMap<&str, u64> = corpus.videos.iter().map(|v| (v.video_id.as_str(), v.view_count)).collect();
    for d in &truth.dyads {
        let subject = format!("{}->{}", d.host, d.guest);
        let (Some(&bh), Some(&bg)) = (expected_baseline.get(d.host.as_str()), expected_baseline.get(d.guest.as_str()))
        else {
            continue;
        };
        let total: i128 = d.videos.iter().map(|v| views[v.as_str()] as i128).sum();
        let mean = Rational::new(total, d.videos.len() as i128);
        let actual = outputs.synergy.synergies.iter().find(|s| s.dyad.host == d.host && s.dyad.guest == d.guest);
        report.check("shap2_host", &subject, Some(mean - bg), actual.map(|s| s.shap2_host));
        report.check("shap2_guest", &subject, Some(mean - bh), actual.map(|s| s.shap2_guest));
        if bh != Rational::from_integer(0) && bg != Rational::from_integer(0) {
            let one = Rational::from_integer(1);
            report.check("shapn_host", &subject, Some((mean - bg) / bg - one), actual.map(|s| s.shapn_host));
            report.check("shapn_guest", &subject, Some((mean - bh) / bh - one), actual.map(|s| s.shapn_guest));
        }
    }

    // commenter entropy
    let mut counts: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();
    let owner: BTreeMap<&str, &str> = corpus.videos.iter().map(|v| (v.video_id.as_str(), v.channel_id.as_str())).collect();
    for c in &corpus.comments {
        *counts.entry(c.author_id.as_str()).or_default().entry(owner[c.video_id.as_str()]).or_insert(0) += 1;
    }
    report.check("commenters", &truth.community, counts.len(), outputs.entropy.per_commenter.len());
    for (author, per_channel) in &counts {
        let c: Vec<u64> = per_channel.values().copied().collect();
        let actual = outputs.entropy.per_commenter.get(*author).map(|e| e.entropy);
        report.check_close("entropy", author, naive_entropy(&c), actual);
    }

    // closeness
    let nodes: Vec<String> = corpus.registry.iter().map(|c| c.channel_id.clone()).collect();
    let pos: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let edges: BTreeSet<(usize, usize)> = truth
        .dyads
        .iter()
        .map(|d| {
            let (a, b) = (pos[d.host.as_str()], pos[d.guest.as_str()]);
            (a.min(b), a.max(b))
        })
        .collect();
    for (node, expected) in nodes.iter().zip(floyd_warshall_closeness(&nodes, &edges)) {
        report.check_close("closeness", node, expected, outputs.closeness.get(node).copied());
    }
    report
}

/// Runs the pipeline on `corpus` and compares it with `truth`.
pub fn oracle_check(corpus: &Corpus, truth: &PlantedTruth) -> Result<VerificationReport, CollabError> {
    let outputs = PipelineOutputs::compute(corpus, &truth.attribute_key)?;
    Ok(compare_outputs(corpus, truth, &outputs))
}
