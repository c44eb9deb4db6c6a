//! Writes synthetic communities to disk in the regular input schemas.

use std::path::Path;

use anyhow::{bail, Context};
use collabkit_core::corpus::Corpus;
use collabkit_core::simgen::{generate, CommunitySpec, PlantedTruth, Preset};

use crate::io;

pub const TRUTH_FILE: &str = "truth.json";

/// Reads a spec from TOML, or JSON when the extension is `.json`.
pub fn load_spec(path: &Path) -> anyhow::Result<CommunitySpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    } else {
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    };
    Ok(spec)
}

/// Resolves `--preset`/`--spec`/`--seed` into one spec. `custom` needs a
/// spec file; a named preset may not be combined with one.
pub fn resolve_spec(preset: &str, spec: Option<&Path>, seed: Option<u64>) -> anyhow::Result<CommunitySpec> {
    let mut resolved = match (preset, spec) {
        ("custom", Some(p)) => load_spec(p)?,
        ("custom", None) => bail!("--preset custom requires --spec <file>"),
        (_, Some(_)) => bail!("--spec is only accepted with --preset custom"),
        (name, None) => {
            let p: Preset = name.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
            CommunitySpec::preset(p, seed.unwrap_or(0))
        }
    };
    if let Some(s) = seed {
        resolved.seed = s;
    }
    Ok(resolved)
}

pub fn write_corpus(dir: &Path, corpus: &Corpus) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    io::write_registry(&dir.join("registry.csv"), &corpus.registry)?;
    io::write_videos(&dir.join("videos.csv"), &corpus.videos)?;
    io::write_comments(&dir.join("comments.csv"), &corpus.comments)?;
    Ok(())
}

/// Generates a community and writes `registry.csv`, `videos.csv`,
/// `comments.csv` and `truth.json` into `dir`.
pub fn simulate_to(dir: &Path, spec: &CommunitySpec) -> anyhow::Result<(Corpus, PlantedTruth)> {
    let (corpus, truth) = generate(spec)?;
    write_corpus(dir, &corpus)?;
    let mut bytes = serde_json::to_vec_pretty(&serde_json::json!({"spec": spec, "truth": truth}))?;
    bytes.push(b'\n');
    std::fs::write(dir.join(TRUTH_FILE), bytes)?;
    Ok((corpus, truth))
}
