use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::lexicon;
use super::tokenize;

/// Comment topic categories. Declaration order is the tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topic {
    Gameplay,
    Environment,
    Food,
    Appearance,
    Other,
}

impl Topic {
    pub const ALL: [Topic; 5] = [Topic::Gameplay, Topic::Environment, Topic::Food, Topic::Appearance, Topic::Other];

    pub fn name(self) -> &'static str {
        match self {
            Topic::Gameplay => "gameplay",
            Topic::Environment => "environment",
            Topic::Food => "food",
            Topic::Appearance => "appearance",
            Topic::Other => "other",
        }
    }
}

impl fmt::Display for Topic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topic {
    type Err = TopicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_lowercase();
        Topic::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or(TopicError::UnknownCategory { name: s })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopicError {
    #[error("unknown topic category {name:?}")]
    UnknownCategory { name: String },
    #[error("topic schema must contain the \"other\" fallback category")]
    MissingOther,
    #[error("keyword {token:?} assigned to category {category} outside the schema")]
    OutsideSchema { category: Topic, token: String },
}

pub trait TopicClassifier {
    fn classify(&self, text: &str) -> Topic;
}

/// Counts keyword hits per category and picks the largest count. Ties go
/// to the earlier category in [`Topic::ALL`]; no hit at all is `Other`.
#[derive(Debug, Clone)]
pub struct KeywordClassifier {
    keywords: BTreeMap<String, Topic>,
}

impl Default for KeywordClassifier {
    fn default() -> Self {
        Self::bundled()
    }
}

impl KeywordClassifier {
    pub fn bundled() -> Self {
        let entries = lexicon::TOPIC_KEYWORDS.iter().map(|(c, t)| (c.to_string(), t.to_string()));
        Self::new(&Topic::ALL.map(Topic::name), entries).expect("bundled topic lexicon is valid")
    }

    /// `schema` lists the category names in use and must include `other`.
    /// Entries are `(category, token)`; a token listed twice keeps its
    /// first category.
    pub fn new(
        schema: &[&str],
        entries: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, TopicError> {
        let schema: Vec<Topic> = schema.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        if !schema.contains(&Topic::Other) {
            return Err(TopicError::MissingOther);
        }
        let mut keywords = BTreeMap::new();
        for (category, token) in entries {
            let category: Topic = category.parse()?;
            if !schema.contains(&category) {
                return Err(TopicError::OutsideSchema { category, token });
            }
            keywords.entry(token.trim().to_lowercase()).or_insert(category);
        }
        Ok(Self { keywords })
    }

    pub fn hits(&self, text: &str) -> [usize; 5] {
        let mut counts = [0usize; 5];
        for token in tokenize(text) {
            if let Some(&t) = self.keywords.get(&token) {
                counts[t as usize] += 1;
            }
        }
        counts
    }
}

impl TopicClassifier for KeywordClassifier {
    fn classify(&self, text: &str) -> Topic {
        let counts = self.hits(text);
        let mut best = Topic::Other;
        let mut best_count = 0;
        // strict > keeps the earliest category on ties
        for topic in Topic::ALL {
            if counts[topic as usize] > best_count {
                best = topic;
                best_count = counts[topic as usize];
            }
        }
        best
    }
}
