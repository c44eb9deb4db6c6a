use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use collabkit::config::{OutputFormat, RunConfig};
use collabkit::pipeline::Stage;
use collabkit::{run, sim};
use collabkit_core::corpus::BaselineMode;
use collabkit_core::netmetrics::ClosenessConvention;
use collabkit_core::synergy::Aggregation;
use serde::de::DeserializeOwned;

#[derive(Debug, Parser)]
#[command(name = "collabkit", version, about = "Creator collaboration analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every analysis subcommand. Precedence is flag, then
/// environment variable, then config file, then built-in default.
#[derive(Debug, Args)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true, env = "COLLABKIT_CONFIG")]
    config: Option<PathBuf>,
    /// Community corpus directory; repeat for several communities.
    #[arg(long = "corpus", global = true, env = "COLLABKIT_CORPUS", value_delimiter = ',')]
    corpora: Vec<PathBuf>,
    /// Restrict the run to these community names.
    #[arg(long = "community", global = true, env = "COLLABKIT_COMMUNITY", value_delimiter = ',')]
    communities: Vec<String>,
    /// Output formats to write.
    #[arg(long = "format", global = true, env = "COLLABKIT_FORMAT", value_delimiter = ',')]
    formats: Vec<OutputFormat>,
    /// Output directory.
    #[arg(long, global = true, env = "COLLABKIT_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "COLLABKIT_ATTRIBUTE_KEY")]
    attribute_key: Option<String>,
    /// Keep only each channel's most recent N videos.
    #[arg(long, global = true, env = "COLLABKIT_MAX_VIDEOS_PER_CHANNEL")]
    max_videos_per_channel: Option<usize>,
    /// exclude-collaborations or all-videos.
    #[arg(long, global = true, env = "COLLABKIT_BASELINE", value_parser = parse_kebab::<BaselineMode>)]
    baseline: Option<BaselineMode>,
    /// median or mean.
    #[arg(long, global = true, env = "COLLABKIT_AGGREGATION", value_parser = parse_kebab::<Aggregation>)]
    aggregation: Option<Aggregation>,
    /// component-scaled or largest-component.
    #[arg(long, global = true, env = "COLLABKIT_CLOSENESS", value_parser = parse_kebab::<ClosenessConvention>)]
    closeness: Option<ClosenessConvention>,
    /// Minimum comments for a commenter to enter the entropy report.
    #[arg(long, global = true, env = "COLLABKIT_MIN_COMMENTS")]
    min_comments: Option<u64>,
    #[arg(long, global = true, env = "COLLABKIT_VALENCE_LEXICON")]
    valence_lexicon: Option<PathBuf>,
    #[arg(long, global = true, env = "COLLABKIT_TOPIC_LEXICON")]
    topic_lexicon: Option<PathBuf>,
    /// Precomputed sentiment and topic labels (JSON lines).
    #[arg(long, global = true, env = "COLLABKIT_LABELS")]
    labels: Option<PathBuf>,
    #[arg(long, global = true, env = "COLLABKIT_SEED")]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and validate corpora.
    Ingest,
    /// Detect collaborations and dyads.
    Collabs,
    /// Baselines and synergy tables.
    Synergy,
    /// Collaboration graph and closeness.
    Network,
    /// Commenter entropy.
    Entropy,
    /// Sentiment and topic distributions.
    Discourse,
    /// Every stage.
    Report,
    /// Write a synthetic community.
    Simulate {
        /// valorant, animal-crossing, dead-by-daylight or custom.
        #[arg(long, default_value = "valorant")]
        preset: String,
        /// Community spec (TOML or JSON) for `--preset custom`.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
}

fn parse_kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

impl Global {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if !self.corpora.is_empty() {
            cfg.corpora = self.corpora.clone();
        }
        if !self.communities.is_empty() {
            cfg.communities = self.communities.clone();
        }
        if !self.formats.is_empty() {
            cfg.formats = self.formats.clone();
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            )*};
        }
        set!(out, attribute_key, baseline, aggregation, closeness, min_comments, seed);
        macro_rules! set_opt {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    cfg.$field = self.$field.clone();
                }
            )*};
        }
        set_opt!(max_videos_per_channel, valence_lexicon, topic_lexicon, labels);
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("COLLABKIT_LOG", "warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let command = std::env::args().collect::<Vec<_>>().join(" ");
    let stages: &[Stage] = match &cli.command {
        Command::Simulate { preset, spec } => {
            let spec = sim::resolve_spec(preset, spec.as_deref(), cli.global.seed)?;
            let out = cli.global.out.clone().unwrap_or_else(|| PathBuf::from(&spec.community));
            let (corpus, truth) = sim::simulate_to(&out, &spec)?;
            println!(
                "wrote {} channels, {} videos, {} comments ({} dyads) to {}",
                corpus.registry.len(),
                corpus.videos.len(),
                corpus.comments.len(),
                truth.dyads.len(),
                out.display()
            );
            return Ok(true);
        }
        Command::Ingest => &[Stage::Ingest],
        Command::Collabs => &[Stage::Collabs],
        Command::Synergy => &[Stage::Synergy],
        Command::Network => &[Stage::Network],
        Command::Entropy => &[Stage::Entropy],
        Command::Discourse => &[Stage::Discourse],
        Command::Report => &Stage::ALL,
    };
    let cfg = cli.global.resolve()?;
    let outcome = run(&cfg, stages, &command)?;
    for t in &outcome.tables {
        println!("{t}");
    }
    if let Some(f) = &outcome.manifest.failed_stage {
        eprintln!("error: stage {} failed: {}", f.stage, f.error);
        eprintln!("partial outputs written to {}", outcome.out_dir.display());
    }
    Ok(outcome.success())
}
