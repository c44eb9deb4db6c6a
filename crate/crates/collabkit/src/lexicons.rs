//! Loading of custom sentiment and topic lexicons and of labels computed
//! by an external classifier.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use anyhow::{bail, Context};
use collabkit_core::discourse::{KeywordClassifier, LexiconScorer, Topic};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct ValenceRow {
    token: String,
    valence: f64,
}

#[derive(Debug, Deserialize)]
struct TopicRow {
    category: String,
    token: String,
}

/// Valence table from a `token,valence` CSV.
pub fn load_valence(path: &Path) -> anyhow::Result<LexiconScorer> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut entries = Vec::new();
    for row in rdr.deserialize() {
        let row: ValenceRow = row.with_context(|| format!("reading {}", path.display()))?;
        if !row.valence.is_finite() {
            bail!("{}: valence of {:?} is not finite", path.display(), row.token);
        }
        entries.push((row.token, row.valence));
    }
    Ok(LexiconScorer::from_entries(entries))
}

/// Keyword classifier from a `category,token` CSV. `schema` lists the
/// categories in use and must include `other`.
pub fn load_topics(path: &Path, schema: &[&str]) -> anyhow::Result<KeywordClassifier> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut entries = Vec::new();
    for row in rdr.deserialize() {
        let row: TopicRow = row.with_context(|| format!("reading {}", path.display()))?;
        entries.push((row.category, row.token));
    }
    Ok(KeywordClassifier::new(schema, entries)?)
}

#[derive(Debug, Deserialize)]
struct LabelRow {
    comment_id: String,
    label: String,
    score: f64,
}

/// Topic labels and sentiment scores keyed by comment id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrecomputedLabels {
    pub topics: BTreeMap<String, Topic>,
    pub scores: BTreeMap<String, f64>,
}

/// Reads `{"comment_id", "label", "score"}` JSON lines.
pub fn load_labels(path: &Path) -> anyhow::Result<PrecomputedLabels> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = PrecomputedLabels::default();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: LabelRow =
            serde_json::from_str(&line).with_context(|| format!("{}, line {}", path.display(), i + 1))?;
        if !(-1.0..=1.0).contains(&row.score) {
            bail!("{}, line {}: score {} outside [-1, 1]", path.display(), i + 1, row.score);
        }
        let topic: Topic = row.label.parse().with_context(|| format!("{}, line {}", path.display(), i + 1))?;
        out.topics.insert(row.comment_id.clone(), topic);
        out.scores.insert(row.comment_id, row.score);
    }
    Ok(out)
}
