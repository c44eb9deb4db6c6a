//! Loading of community directories and the analysis stages that run on
//! them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use collabkit_core::collab::{detect_collaborations, CollabDetection};
use collabkit_core::corpus::{self, BaselineMode, Baselines, Corpus, Orphan, RowError};
use collabkit_core::discourse::{self, DiscourseReport, KeywordClassifier, LexiconScorer};
use collabkit_core::netmetrics::{
    build_collab_graph, closeness_with, commenter_entropy, entropy_cdf, uniform_grid, AttentionGraph, CdfPoint,
    CentralitySummary, EntropyDistribution,
};
use collabkit_core::synergy::{
    aggregate_by_dyad_type, compute_synergies, reciprocity, ReciprocityStats, SynergyReport, SynergyRun,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::io;
use crate::lexicons::{self, PrecomputedLabels};

/// Where one community's files live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFiles {
    pub registry: PathBuf,
    pub videos: PathBuf,
    pub comments: Option<PathBuf>,
}

fn find(dir: &Path, stem: &str) -> Option<PathBuf> {
    ["csv", "jsonl", "ndjson"].iter().map(|ext| dir.join(format!("{stem}.{ext}"))).find(|p| p.is_file())
}

impl CorpusFiles {
    pub fn locate(dir: &Path) -> anyhow::Result<Self> {
        let registry =
            find(dir, "registry").ok_or_else(|| anyhow!("{}: no registry.csv or registry.jsonl", dir.display()))?;
        let videos = find(dir, "videos").ok_or_else(|| anyhow!("{}: no videos.csv or videos.jsonl", dir.display()))?;
        Ok(Self { registry, videos, comments: find(dir, "comments") })
    }

    pub fn paths(&self) -> Vec<&Path> {
        let mut out = vec![self.registry.as_path(), self.videos.as_path()];
        out.extend(self.comments.as_deref());
        out
    }
}

/// Rejected rows of one input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileIssues {
    pub file: String,
    pub errors: Vec<RowError>,
    pub orphans: Vec<Orphan>,
}

#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub files: CorpusFiles,
    pub issues: Vec<FileIssues>,
    /// Videos removed by the per-channel cap.
    pub capped_videos: usize,
    /// Comments on those videos, dropped with them.
    pub capped_comments: usize,
}

/// Loads one community directory. The three files are decoded in parallel
/// and admitted in dependency order afterwards.
pub fn load_corpus(dir: &Path, cfg: &RunConfig) -> anyhow::Result<LoadedCorpus> {
    let files = CorpusFiles::locate(dir)?;
    let (registry, video_rows, comment_rows) = std::thread::scope(|s| {
        let registry = s.spawn(|| io::load_registry(&files.registry, &cfg.attribute_key));
        let videos = s.spawn(|| io::read_video_rows(&files.videos));
        let comments = s.spawn(|| files.comments.as_deref().map(io::read_comment_rows).transpose());
        (registry.join(), videos.join(), comments.join())
    });
    let registry = registry.map_err(|_| anyhow!("registry loader panicked"))??;
    let video_rows = video_rows.map_err(|_| anyhow!("video loader panicked"))??;
    let comment_rows = comment_rows.map_err(|_| anyhow!("comment loader panicked"))??;

    let mut videos = corpus::admit_videos(video_rows.rows, &registry);
    videos.errors.extend(video_rows.errors);
    videos.errors.sort_by_key(|e| e.line);
    let mut capped: BTreeSet<String> = BTreeSet::new();
    if let Some(limit) = cfg.max_videos_per_channel {
        let all: BTreeSet<String> = videos.records.iter().map(|v| v.video_id.clone()).collect();
        corpus::cap_recent_videos(&mut videos.records, limit);
        let kept: BTreeSet<&str> = videos.records.iter().map(|v| v.video_id.as_str()).collect();
        capped = all.into_iter().filter(|id| !kept.contains(id.as_str())).collect();
    }

    let mut issues =
        vec![FileIssues { file: files.videos.display().to_string(), errors: videos.errors, orphans: Vec::new() }];
    let mut comments = Vec::new();
    let mut capped_comments = 0;
    if let (Some(path), Some(decoded)) = (&files.comments, comment_rows) {
        let total = decoded.rows.len();
        let rows: Vec<_> = decoded.rows.into_iter().filter(|(_, c)| !capped.contains(&c.video_id)).collect();
        capped_comments = total - rows.len();
        let mut admitted = corpus::admit_comments(rows, &videos.records);
        admitted.errors.extend(decoded.errors);
        admitted.errors.sort_by_key(|e| e.line);
        issues.push(FileIssues { file: path.display().to_string(), errors: admitted.errors, orphans: admitted.orphans });
        comments = admitted.records;
    }

    let community = registry
        .first()
        .map(|c| c.community.clone())
        .unwrap_or_else(|| dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
    let corpus = Corpus::new(community, registry, videos.records, comments)
        .with_context(|| format!("assembling corpus from {}", dir.display()))?;
    Ok(LoadedCorpus { corpus, files, issues, capped_videos: capped.len(), capped_comments })
}

/// Pipeline stages in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Ingest,
    Collabs,
    Synergy,
    Network,
    Entropy,
    Discourse,
}

impl Stage {
    pub const ALL: [Stage; 6] =
        [Stage::Ingest, Stage::Collabs, Stage::Synergy, Stage::Network, Stage::Entropy, Stage::Discourse];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Collabs => "collabs",
            Stage::Synergy => "synergy",
            Stage::Network => "network",
            Stage::Entropy => "entropy",
            Stage::Discourse => "discourse",
        }
    }

    /// Stages this one needs, itself included.
    pub fn closure(self) -> BTreeSet<Stage> {
        let mut s = BTreeSet::from([Stage::Ingest, self]);
        if matches!(self, Stage::Synergy | Stage::Network | Stage::Discourse) {
            s.insert(Stage::Collabs);
        }
        s
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub community: String,
    pub error: anyhow::Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} failed for {}: {:#}", self.stage, self.community, self.error)
    }
}

impl std::error::Error for StageError {}

#[derive(Debug, Clone)]
pub struct SynergyOutputs {
    pub baselines: Baselines,
    pub run: SynergyRun,
    pub report: SynergyReport,
    pub reciprocity: ReciprocityStats,
}

#[derive(Debug, Clone)]
pub struct EntropyOutputs {
    pub distribution: EntropyDistribution,
    pub cdf: Vec<CdfPoint>,
}

/// Everything computed for one community. Stages that were not requested
/// stay `None`.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub community: String,
    pub detection: Option<CollabDetection>,
    pub synergy: Option<SynergyOutputs>,
    pub centrality: Option<CentralitySummary>,
    pub entropy: Option<EntropyOutputs>,
    pub discourse: Option<DiscourseReport>,
}

/// Sentiment and topic sources shared by every community of a run.
pub enum DiscourseSource {
    Bundled { scorer: LexiconScorer, classifier: KeywordClassifier },
    Precomputed(PrecomputedLabels),
}

impl DiscourseSource {
    pub fn from_config(cfg: &RunConfig) -> anyhow::Result<Self> {
        if let Some(path) = &cfg.labels {
            return Ok(Self::Precomputed(lexicons::load_labels(path)?));
        }
        let scorer = match &cfg.valence_lexicon {
            Some(p) => lexicons::load_valence(p)?,
            None => LexiconScorer::bundled(),
        };
        let classifier = match &cfg.topic_lexicon {
            Some(p) => {
                let schema: Vec<&str> = cfg.topic_schema.iter().map(String::as_str).collect();
                lexicons::load_topics(p, &schema)?
            }
            None => KeywordClassifier::bundled(),
        };
        Ok(Self::Bundled { scorer, classifier })
    }

    fn report(&self, corpus: &Corpus, detection: &CollabDetection) -> DiscourseReport {
        match self {
            Self::Bundled { scorer, classifier } => {
                let labels = discourse::tag_all(corpus, classifier);
                let scores = discourse::score_all(corpus, scorer);
                discourse::aggregate_discourse(corpus, detection, &labels, &scores)
            }
            Self::Precomputed(l) => discourse::aggregate_discourse(corpus, detection, &l.topics, &l.scores),
        }
    }
}

fn synergy_stage(corpus: &Corpus, detection: &CollabDetection, cfg: &RunConfig) -> SynergyOutputs {
    let exclude = match cfg.baseline {
        BaselineMode::ExcludeCollaborations => detection.collaboration_videos(),
        BaselineMode::AllVideos => BTreeSet::new(),
    };
    let baselines = Baselines::compute(&corpus.registry, &corpus.videos, &exclude);
    let run = compute_synergies(&detection.dyads, &corpus.videos, &baselines);
    let report = aggregate_by_dyad_type(&corpus.community, &run.synergies, cfg.aggregation);
    let reciprocity = reciprocity(&corpus.community, &detection.dyads, &baselines);
    SynergyOutputs { baselines, run, report, reciprocity }
}

fn entropy_stage(corpus: &Corpus, cfg: &RunConfig) -> EntropyOutputs {
    let distribution = commenter_entropy(&AttentionGraph::build(&corpus.comments, &corpus.videos), cfg.min_comments);
    let max = distribution.max().unwrap_or(0.0);
    let cdf = entropy_cdf(&distribution, &uniform_grid(max, cfg.entropy_grid_step));
    EntropyOutputs { distribution, cdf }
}

/// Runs `stages` (plus their prerequisites) on one community. Independent
/// stages run on separate threads once collaborations are known.
pub fn analyze(
    loaded: &LoadedCorpus,
    cfg: &RunConfig,
    stages: &BTreeSet<Stage>,
    source: &DiscourseSource,
) -> Result<Analysis, StageError> {
    let corpus = &loaded.corpus;
    let want = |s: Stage| stages.iter().any(|x| x.closure().contains(&s));
    let fail = |stage: Stage, error: anyhow::Error| StageError { stage, community: corpus.community.clone(), error };

    let detection = if want(Stage::Collabs) {
        Some(detect_collaborations(corpus, &cfg.attribute_key).map_err(|e| fail(Stage::Collabs, e.into()))?)
    } else {
        None
    };
    let (synergy, centrality, entropy, discourse) = std::thread::scope(|s| {
        let d = detection.as_ref();
        let synergy = s.spawn(move || d.filter(|_| want(Stage::Synergy)).map(|d| synergy_stage(corpus, d, cfg)));
        let centrality = s.spawn(move || {
            d.filter(|_| want(Stage::Network)).map(|d| {
                let graph = build_collab_graph(&corpus.registry, &d.dyads);
                CentralitySummary::new(closeness_with(&graph, cfg.closeness), &corpus.registry, &cfg.attribute_key)
            })
        });
        let entropy = s.spawn(move || want(Stage::Entropy).then(|| entropy_stage(corpus, cfg)));
        let discourse = s.spawn(move || d.filter(|_| want(Stage::Discourse)).map(|d| source.report(corpus, d)));
        (synergy.join(), centrality.join(), entropy.join(), discourse.join())
    });
    let panicked = |stage| fail(stage, anyhow!("worker panicked"));
    Ok(Analysis {
        community: corpus.community.clone(),
        synergy: synergy.map_err(|_| panicked(Stage::Synergy))?,
        centrality: centrality.map_err(|_| panicked(Stage::Network))?,
        entropy: entropy.map_err(|_| panicked(Stage::Entropy))?,
        discourse: discourse.map_err(|_| panicked(Stage::Discourse))?,
        detection,
    })
}

/// Attribute values in table column order: configured labels first, then
/// any other value seen in the registries, sorted.
pub fn attribute_order(cfg: &RunConfig, corpora: &[&Corpus]) -> Vec<String> {
    let mut order = cfg.attribute_labels.clone();
    let mut extra: BTreeMap<String, ()> = BTreeMap::new();
    for c in corpora {
        for ch in &c.registry {
            if let Some(v) = ch.attribute(&cfg.attribute_key) {
                if !order.iter().any(|o| o == v) {
                    extra.insert(v.to_string(), ());
                }
            }
        }
    }
    order.extend(extra.into_keys());
    order
}

/// Dyad-type columns as the host-major cross product of `labels`.
pub fn dyad_columns(labels: &[String]) -> Vec<String> {
    labels.iter().flat_map(|h| labels.iter().map(move |g| format!("{h}-{g}"))).collect()
}
