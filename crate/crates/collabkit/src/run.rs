//! Orchestration: load every community, run the requested stages, render
//! the artifacts and write them with a manifest.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{OutputFormat, RunConfig};
use crate::pipeline::{self, Analysis, DiscourseSource, LoadedCorpus, Stage, StageError};
use crate::report::{self, Files, Side};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST: &str = "manifest.json";
pub const PARTIAL_MARKER: &str = "PARTIAL";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn digest_file(path: &Path) -> anyhow::Result<FileDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest { path: path.display().to_string(), bytes: bytes.len() as u64, sha256: sha256_hex(&bytes) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Completed,
    Failed,
    NotRun,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub status: StageStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub stage: Stage,
    pub community: Option<String>,
    pub error: String,
}

/// Written next to every bundle, also when a stage fails. Contains no
/// timestamps so identical runs produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: &'static str,
    pub failed_stage: Option<Failure>,
    pub config: RunConfig,
    pub inputs: Vec<FileDigest>,
    pub stages: Vec<StageRecord>,
    pub outputs: Vec<FileDigest>,
}

/// Result of one invocation.
#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub tables: Vec<String>,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn success(&self) -> bool {
        self.manifest.failed_stage.is_none()
    }
}

fn render(cfg: &RunConfig, loaded: &[&LoadedCorpus], analyses: &[Analysis], done: &BTreeSet<Stage>) -> (Files, Vec<String>) {
    let mut files = Files::new();
    let mut tables = Vec::new();
    let corpora: Vec<_> = loaded.iter().map(|l| &l.corpus).collect();
    let columns = pipeline::dyad_columns(&pipeline::attribute_order(cfg, &corpora));
    let csv = cfg.wants(OutputFormat::Csv);
    let json = cfg.wants(OutputFormat::Json);
    let table = cfg.wants(OutputFormat::Table);
    let mut put = |name: &str, bytes: Vec<u8>| {
        files.insert(name.to_string(), bytes);
    };

    if done.contains(&Stage::Ingest) {
        let (summary, issues) = report::ingest_summary(loaded);
        put("ingest_summary.csv", summary);
        put("ingest_issues.jsonl", issues);
    }
    if done.contains(&Stage::Collabs) {
        put("dyads.jsonl", report::dyads_jsonl(analyses));
        put("collab_stats.jsonl", report::collab_stats_jsonl(analyses));
        if csv {
            put("collab_share.csv", report::collab_share_csv(analyses, &columns));
        }
        if table {
            let t = report::collab_share_table(analyses, &columns);
            put("collab_share.txt", t.clone().into_bytes());
            tables.push(t);
        }
    }
    if done.contains(&Stage::Synergy) {
        put("synergy_dyads.csv", report::synergy_dyads_csv(analyses));
        if json {
            put("synergy_dyads.jsonl", report::synergy_dyads_jsonl(analyses));
        }
        for (side, suffix) in [(Side::Host, "a"), (Side::Guest, "b")] {
            if csv {
                put(&format!("synergy_table_{suffix}.csv"), report::synergy_table_csv(analyses, &columns, side));
            }
            if json {
                put(
                    &format!("synergy_table_{suffix}.json"),
                    report::synergy_table_json(analyses, &columns, side, cfg.aggregation),
                );
            }
            if table {
                let t = report::synergy_table_text(analyses, &columns, side, cfg.aggregation);
                put(&format!("synergy_table_{suffix}.txt"), t.clone().into_bytes());
                tables.push(t);
            }
        }
        if csv {
            put("reciprocity.csv", report::reciprocity_csv(analyses));
        }
        if table {
            let t = report::reciprocity_table(analyses);
            put("reciprocity.txt", t.clone().into_bytes());
            tables.push(t);
        }
    }
    if done.contains(&Stage::Network) {
        put("centrality.csv", report::centrality_csv(analyses, loaded, &cfg.attribute_key));
        if csv {
            put("centrality_summary.csv", report::centrality_summary_csv(analyses));
        }
        if json {
            put("centrality_summary.json", report::centrality_summary_json(analyses));
        }
        if table {
            let t = report::centrality_summary_table(analyses);
            put("centrality_summary.txt", t.clone().into_bytes());
            tables.push(t);
        }
    }
    if done.contains(&Stage::Entropy) {
        put("entropy_commenters.csv", report::entropy_commenters_csv(analyses));
        put("entropy_cdf.csv", report::entropy_cdf_csv(analyses));
        if table {
            let t = report::entropy_summary_table(analyses);
            put("entropy_summary.txt", t.clone().into_bytes());
            tables.push(t);
        }
    }
    if done.contains(&Stage::Discourse) {
        if csv {
            put("discourse.csv", report::discourse_csv(analyses, &columns));
        }
        if json {
            put("discourse.json", report::discourse_json(analyses));
        }
        if table {
            let t = report::discourse_table(analyses, &columns);
            put("discourse.txt", t.clone().into_bytes());
            tables.push(t);
        }
    }
    (files, tables)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> anyhow::Result<FileDigest> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(FileDigest { path: name.to_string(), bytes: bytes.len() as u64, sha256: sha256_hex(bytes) })
}

/// Runs `requested` stages over every corpus in `cfg` and writes the bundle
/// to `cfg.out`. Stage failures are reported in the outcome, not as `Err`;
/// `Err` means the bundle itself could not be written.
pub fn run(cfg: &RunConfig, requested: &[Stage], command: &str) -> anyhow::Result<RunOutcome> {
    let stages: BTreeSet<Stage> = requested.iter().flat_map(|s| s.closure()).collect();
    let mut failure: Option<Failure> = None;
    let mut done: BTreeSet<Stage> = BTreeSet::new();
    let mut inputs = Vec::new();
    let mut loaded: Vec<LoadedCorpus> = Vec::new();
    let mut analyses: Vec<Analysis> = Vec::new();

    let prepared = cfg.validate().and_then(|()| {
        if stages.contains(&Stage::Discourse) { DiscourseSource::from_config(cfg).map(Some) } else { Ok(None) }
    });
    let source = match prepared {
        Ok(s) => s,
        Err(e) => {
            failure = Some(Failure { stage: Stage::Ingest, community: None, error: format!("{e:#}") });
            None
        }
    };
    for extra in cfg.labels.iter().chain(&cfg.valence_lexicon).chain(&cfg.topic_lexicon) {
        if let Ok(d) = digest_file(extra) {
            inputs.push(d);
        }
    }

    if failure.is_none() {
        for dir in &cfg.corpora {
            let result = pipeline::load_corpus(dir, cfg);
            if let Ok(files) = pipeline::CorpusFiles::locate(dir) {
                for p in files.paths() {
                    inputs.push(digest_file(p)?);
                }
            }
            match result {
                Ok(l) if cfg.communities.is_empty() || cfg.communities.contains(&l.corpus.community) => loaded.push(l),
                Ok(_) => {}
                Err(e) => {
                    failure = Some(Failure {
                        stage: Stage::Ingest,
                        community: Some(dir.display().to_string()),
                        error: format!("{e:#}"),
                    });
                    break;
                }
            }
        }
    }
    if failure.is_none() {
        done.insert(Stage::Ingest);
        let fallback = DiscourseSource::Precomputed(Default::default());
        let source = source.as_ref().unwrap_or(&fallback);
        for l in &loaded {
            match pipeline::analyze(l, cfg, &stages, source) {
                Ok(a) => analyses.push(a),
                Err(StageError { stage, community, error }) => {
                    failure = Some(Failure { stage, community: Some(community), error: format!("{error:#}") });
                    break;
                }
            }
        }
    }
    // after a failed analysis the bundle still renders whatever communities
    // finished; the PARTIAL marker and manifest flag it
    let rendered: BTreeSet<Stage> = if done.contains(&Stage::Ingest) { stages.clone() } else { BTreeSet::new() };
    let refs: Vec<&LoadedCorpus> = loaded.iter().collect();
    let (files, tables) = render(cfg, &refs, &analyses, &rendered);

    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut outputs = Vec::new();
    for (name, bytes) in &files {
        outputs.push(write_file(&cfg.out, name, bytes)?);
    }
    outputs.push(write_file(&cfg.out, "config.toml", cfg.to_toml()?.as_bytes())?);

    let stage_records = Stage::ALL
        .iter()
        .filter(|s| stages.contains(s))
        .map(|&stage| StageRecord {
            stage,
            status: if failure.as_ref().is_some_and(|f| f.stage == stage) {
                StageStatus::Failed
            } else if done.contains(&stage) || failure.is_none() {
                StageStatus::Completed
            } else {
                StageStatus::NotRun
            },
        })
        .collect();
    let manifest = Manifest {
        tool: "collabkit",
        version: TOOL_VERSION,
        command: command.to_string(),
        status: if failure.is_some() { "partial" } else { "complete" },
        failed_stage: failure,
        config: cfg.clone(),
        inputs,
        stages: stage_records,
        outputs,
    };
    let marker = cfg.out.join(PARTIAL_MARKER);
    match &manifest.failed_stage {
        Some(f) => {
            let text = format!(
                "outputs in this directory are incomplete\nfailed stage: {}\nerror: {}\n",
                f.stage, f.error
            );
            std::fs::write(&marker, text)?;
        }
        None if marker.exists() => std::fs::remove_file(&marker)?,
        None => {}
    }
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    std::fs::write(cfg.out.join(MANIFEST), bytes)?;
    Ok(RunOutcome { manifest, tables, out_dir: cfg.out.clone() })
}
