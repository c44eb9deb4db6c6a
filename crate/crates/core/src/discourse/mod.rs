//! Comment sentiment, topic tagging and their aggregation by dyad type.
//!
//! Scorers and classifiers sit behind [`SentimentScorer`] and
//! [`TopicClassifier`]; labels computed elsewhere can be passed straight to
//! [`aggregate_discourse`] as maps keyed by comment id.

pub(crate) mod lexicon;
pub mod sentiment;
pub mod topic;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use sentiment::{LexiconScorer, SentimentScorer};
pub use topic::{KeywordClassifier, Topic, TopicClassifier, TopicError};

use crate::collab::CollabDetection;
use crate::corpus::Corpus;

/// Lowercased tokens split on anything but alphanumerics and apostrophes.
/// Typographic apostrophes are folded to `'`; stray leading or trailing
/// apostrophes are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        let t = current.trim_matches('\'');
        if !t.is_empty() {
            tokens.push(t.to_string());
        }
        current.clear();
    };
    for c in text.chars() {
        let c = if c == '\u{2019}' || c == '\u{2018}' { '\'' } else { c };
        if c.is_alphanumeric() || c == '\'' {
            current.extend(c.to_lowercase());
        } else {
            flush(&mut current);
        }
    }
    flush(&mut current);
    tokens
}

/// Topic of every comment, keyed by comment id.
pub fn tag_all<C: TopicClassifier + ?Sized>(corpus: &Corpus, classifier: &C) -> BTreeMap<String, Topic> {
    corpus.comments.iter().map(|c| (c.comment_id.clone(), classifier.classify(&c.text))).collect()
}

/// Sentiment of every comment, keyed by comment id.
pub fn score_all<S: SentimentScorer + ?Sized>(corpus: &Corpus, scorer: &S) -> BTreeMap<String, f64> {
    sentiment::score_all(corpus.comments.iter().map(|c| (c.comment_id.as_str(), c.text.as_str())), scorer)
}

/// Summary of one group of comments (a dyad type or the baseline pool).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub comments: usize,
    pub mean_sentiment: f64,
    /// Sample standard deviation; 0 for a single comment.
    pub sd_sentiment: f64,
    pub topic_proportions: BTreeMap<Topic, f64>,
}

#[derive(Debug, Clone, Default)]
struct GroupAccumulator {
    scores: Vec<f64>,
    topics: [usize; 5],
}

impl GroupAccumulator {
    fn push(&mut self, score: f64, topic: Topic) {
        self.scores.push(score);
        self.topics[topic as usize] += 1;
    }

    fn finish(self) -> Option<GroupStats> {
        let n = self.scores.len();
        if n == 0 {
            return None;
        }
        let mean = self.scores.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            let ss: f64 = self.scores.iter().map(|s| (s - mean) * (s - mean)).sum();
            libm::sqrt(ss / (n - 1) as f64)
        } else {
            0.0
        };
        let topic_proportions =
            Topic::ALL.iter().map(|&t| (t, self.topics[t as usize] as f64 / n as f64)).collect();
        Some(GroupStats { comments: n, mean_sentiment: mean, sd_sentiment: sd, topic_proportions })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscourseReport {
    pub community: String,
    /// Dyad types with at least one comment.
    pub by_dyad_type: BTreeMap<String, GroupStats>,
    /// Comments on videos with no registry mention.
    pub baseline: Option<GroupStats>,
    /// Comments on multi-way videos, which belong to neither side.
    pub multi_way_comments: usize,
    /// Comments missing a score or a label.
    pub unlabeled_comments: usize,
}

/// Attributes every comment to its video's dyad type, or to the
/// non-collaboration baseline, and averages per comment.
pub fn aggregate_discourse(
    corpus: &Corpus,
    detection: &CollabDetection,
    labels: &BTreeMap<String, Topic>,
    scores: &BTreeMap<String, f64>,
) -> DiscourseReport {
    let mut video_type: BTreeMap<&str, &str> = BTreeMap::new();
    for d in &detection.dyads {
        for v in &d.videos {
            video_type.insert(v.as_str(), d.dyad_type.as_str());
        }
    }
    let mut groups: BTreeMap<String, GroupAccumulator> = BTreeMap::new();
    let mut baseline = GroupAccumulator::default();
    let mut multi_way_comments = 0;
    let mut unlabeled_comments = 0;
    for c in &corpus.comments {
        let (Some(&score), Some(&topic)) = (scores.get(&c.comment_id), labels.get(&c.comment_id)) else {
            unlabeled_comments += 1;
            continue;
        };
        if let Some(t) = video_type.get(c.video_id.as_str()) {
            groups.entry(t.to_string()).or_default().push(score, topic);
        } else if detection.multi_way_videos.contains(&c.video_id) {
            multi_way_comments += 1;
        } else {
            baseline.push(score, topic);
        }
    }
    DiscourseReport {
        community: corpus.community.clone(),
        by_dyad_type: groups.into_iter().filter_map(|(t, a)| a.finish().map(|s| (t, s))).collect(),
        baseline: baseline.finish(),
        multi_way_comments,
        unlabeled_comments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collab::detect_collaborations;
    use crate::corpus::{ChannelRecord, CommentRecord, VideoRecord};
    use alloc::format;
    use alloc::vec;

    #[test]
    fn tokenizer() {
        assert_eq!(tokenize("Don't STOP, gg!! 'quoted'"), ["don't", "stop", "gg", "quoted"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("...").is_empty());
    }

    fn fixture() -> Corpus {
        let ch = |id: &str, g: &str| ChannelRecord {
            channel_id: id.into(),
            handles: vec![id.to_lowercase()],
            display_name: id.into(),
            attributes: [("gender".to_string(), g.to_string())].into_iter().collect(),
            community: "c".into(),
        };
        let v = |id: &str, owner: &str, desc: &str| VideoRecord {
            video_id: id.into(),
            channel_id: owner.into(),
            published_at: Default::default(),
            title: String::new(),
            description: desc.into(),
            view_count: 1,
            like_count: None,
            comment_count: None,
        };
        let videos = vec![
            v("mm", "A", "with @b"),
            v("solo", "A", "alone"),
            v("multi", "A", "with @b and @c"),
        ];
        let comments = [("mm", "x"), ("mm", "y"), ("solo", "z"), ("multi", "q")]
            .iter()
            .enumerate()
            .map(|(i, (vid, author))| CommentRecord {
                comment_id: format!("k{i}"),
                video_id: vid.to_string(),
                author_id: author.to_string(),
                text: String::new(),
                published_at: Default::default(),
                like_count: None,
            })
            .collect();
        Corpus::new("c", vec![ch("A", "M"), ch("B", "M"), ch("C", "W")], videos, comments).unwrap()
    }

    #[test]
    fn means_against_baseline() {
        let corpus = fixture();
        let det = detect_collaborations(&corpus, "gender").unwrap();
        let scores: BTreeMap<String, f64> =
            [("k0", 0.1), ("k1", 0.3), ("k2", 0.2), ("k3", 0.9)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let labels: BTreeMap<String, Topic> = [("k0", Topic::Gameplay), ("k1", Topic::Food), ("k2", Topic::Other), ("k3", Topic::Other)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let rep = aggregate_discourse(&corpus, &det, &labels, &scores);
        let mm = &rep.by_dyad_type["M-M"];
        assert!((mm.mean_sentiment - 0.2).abs() < 1e-15);
        assert_eq!(mm.comments, 2);
        assert_eq!(mm.topic_proportions[&Topic::Gameplay], 0.5);
        assert_eq!(rep.baseline.as_ref().unwrap().mean_sentiment, 0.2);
        assert_eq!(rep.multi_way_comments, 1);
        assert!(!rep.by_dyad_type.contains_key("W-W"));
    }

    #[test]
    fn constant_zero_scores() {
        let corpus = fixture();
        let det = detect_collaborations(&corpus, "gender").unwrap();
        let scores = score_all(&corpus, &|_: &str| 0.0);
        let labels = tag_all(&corpus, &KeywordClassifier::bundled());
        let rep = aggregate_discourse(&corpus, &det, &labels, &scores);
        assert!(rep.by_dyad_type.values().all(|g| g.mean_sentiment == 0.0));
        assert_eq!(rep.baseline.unwrap().mean_sentiment, 0.0);
        for g in rep.by_dyad_type.values() {
            assert_eq!(g.topic_proportions.len(), 5);
            assert!((g.topic_proportions.values().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
