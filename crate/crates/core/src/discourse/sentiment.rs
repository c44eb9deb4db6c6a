use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use super::lexicon;
use super::tokenize;

/// Multiplier applied to a valence preceded by a negator.
pub const NEGATION_SCALAR: f64 = -0.74;
/// Magnitude a booster adds toward the valence sign.
pub const BOOSTER_INCREMENT: f64 = 0.293;
/// `s / sqrt(s^2 + ALPHA)` maps the raw sum into (-1, 1).
pub const NORMALIZATION_ALPHA: f64 = 15.0;
/// Tokens looked at before a valence token for negators and boosters.
pub const WINDOW: usize = 3;

/// Anything that maps comment text to a compound score in [-1, 1].
pub trait SentimentScorer {
    fn score(&self, text: &str) -> f64;
}

impl<F: Fn(&str) -> f64> SentimentScorer for F {
    fn score(&self, text: &str) -> f64 {
        self(text)
    }
}

/// Lexicon and rule-based scorer.
///
/// Each lexicon token contributes its valence. Boosters among the previous
/// three tokens push the valence away from zero (or toward it, for
/// dampeners) by 0.293 each; a negator in the same window then multiplies
/// it by -0.74. The sum `s` is normalized to `s / sqrt(s^2 + 15)`.
#[derive(Debug, Clone)]
pub struct LexiconScorer {
    valence: BTreeMap<String, f64>,
    negators: BTreeSet<String>,
    boosters: BTreeMap<String, f64>,
}

impl Default for LexiconScorer {
    fn default() -> Self {
        Self::bundled()
    }
}

impl LexiconScorer {
    pub fn bundled() -> Self {
        Self::from_entries(lexicon::VALENCE.iter().map(|(t, v)| (t.to_string(), *v)))
    }

    /// Custom valence table with the bundled negators and boosters.
    pub fn from_entries(entries: impl IntoIterator<Item = (String, f64)>) -> Self {
        let valence = entries.into_iter().map(|(t, v)| (t.to_lowercase(), v)).collect();
        let negators = lexicon::NEGATORS.iter().map(|s| s.to_string()).collect();
        let boosters = lexicon::BOOSTERS_UP
            .iter()
            .map(|s| (s.to_string(), BOOSTER_INCREMENT))
            .chain(lexicon::BOOSTERS_DOWN.iter().map(|s| (s.to_string(), -BOOSTER_INCREMENT)))
            .collect();
        Self { valence, negators, boosters }
    }

    pub fn len(&self) -> usize {
        self.valence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valence.is_empty()
    }

    /// Sum of adjusted valences before normalization.
    pub fn raw_sum(&self, text: &str) -> f64 {
        let tokens = tokenize(text);
        let mut sum = 0.0;
        for (i, token) in tokens.iter().enumerate() {
            let Some(&base) = self.valence.get(token.as_str()) else { continue };
            if base == 0.0 {
                continue;
            }
            let window = &tokens[i.saturating_sub(WINDOW)..i];
            let mut v = base;
            for w in window {
                if let Some(&b) = self.boosters.get(w.as_str()) {
                    v += b * base.signum();
                }
            }
            if window.iter().any(|w| self.negators.contains(w.as_str())) {
                v *= NEGATION_SCALAR;
            }
            sum += v;
        }
        sum
    }
}

pub fn normalize_score(sum: f64) -> f64 {
    if sum == 0.0 {
        return 0.0;
    }
    sum / libm::sqrt(sum * sum + NORMALIZATION_ALPHA)
}

impl SentimentScorer for LexiconScorer {
    fn score(&self, text: &str) -> f64 {
        normalize_score(self.raw_sum(text))
    }
}

/// Scores every comment text with `scorer`, keyed by comment id.
pub fn score_all<'a, S: SentimentScorer + ?Sized>(
    comments: impl IntoIterator<Item = (&'a str, &'a str)>,
    scorer: &S,
) -> BTreeMap<String, f64> {
    comments.into_iter().map(|(id, text)| (id.to_string(), scorer.score(text))).collect()
}
