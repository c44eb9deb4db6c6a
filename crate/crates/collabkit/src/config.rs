//! Run configuration shared by every subcommand. A TOML file supplies
//! defaults; command-line flags and `COLLABKIT_*` variables override it.

use std::path::{Path, PathBuf};

use anyhow::Context;
use collabkit_core::corpus::{BaselineMode, DEFAULT_ATTRIBUTE_KEY};
use collabkit_core::netmetrics::ClosenessConvention;
use collabkit_core::synergy::Aggregation;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// One directory per community holding `registry`, `videos` and
    /// `comments` files (`.csv` or `.jsonl`).
    pub corpora: Vec<PathBuf>,
    /// Restricts a run to these communities when set.
    pub communities: Vec<String>,
    pub attribute_key: String,
    /// Column order of the dyad-type tables; other values found in the
    /// registry are appended in sorted order.
    pub attribute_labels: Vec<String>,
    pub baseline: BaselineMode,
    pub aggregation: Aggregation,
    pub closeness: ClosenessConvention,
    /// Commenters with fewer comments are left out of the entropy report.
    pub min_comments: u64,
    pub entropy_grid_step: f64,
    /// Keeps only the most recent N videos of each channel.
    pub max_videos_per_channel: Option<usize>,
    pub valence_lexicon: Option<PathBuf>,
    pub topic_lexicon: Option<PathBuf>,
    pub topic_schema: Vec<String>,
    /// Precomputed `{comment_id, label, score}` lines; replaces the
    /// bundled scorer and classifier.
    pub labels: Option<PathBuf>,
    pub out: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpora: Vec::new(),
            communities: Vec::new(),
            attribute_key: DEFAULT_ATTRIBUTE_KEY.to_string(),
            attribute_labels: vec!["W".into(), "M".into()],
            baseline: BaselineMode::default(),
            aggregation: Aggregation::default(),
            closeness: ClosenessConvention::default(),
            min_comments: 0,
            entropy_grid_step: 0.1,
            max_videos_per_channel: None,
            valence_lexicon: None,
            topic_lexicon: None,
            topic_schema: ["gameplay", "environment", "food", "appearance", "other"].map(String::from).to_vec(),
            labels: None,
            out: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Table],
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(!self.attribute_key.is_empty(), "attribute key is empty");
        anyhow::ensure!(
            self.entropy_grid_step > 0.0 && self.entropy_grid_step.is_finite(),
            "entropy grid step must be positive"
        );
        anyhow::ensure!(self.max_videos_per_channel != Some(0), "video cap must be at least 1");
        for p in self.corpora.iter().chain(&self.valence_lexicon).chain(&self.topic_lexicon).chain(&self.labels) {
            anyhow::ensure!(p.exists(), "input path {} does not exist", p.display());
        }
        Ok(())
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }
}
