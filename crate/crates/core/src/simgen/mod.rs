//! Seeded synthetic creator communities with planted parameters, and an
//! independent oracle that re-derives every metric from raw rows.
//!
//! All randomness comes from one `u64` seed split into fixed ChaCha
//! streams per entity class, so each class is reproducible on its own.

mod generate;
mod oracle;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generate::generate;
pub use oracle::{compare_outputs, oracle_check, Mismatch, PipelineOutputs, VerificationReport};

use crate::corpus::{ChannelId, VideoId, DEFAULT_ATTRIBUTE_KEY};
use crate::discourse::Topic;

/// Comment-text profile for one class of video (a dyad type or `baseline`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscourseProfile {
    pub topic_weights: BTreeMap<Topic, f64>,
    /// Probability a comment is positive.
    pub positive: f64,
    /// Probability a comment is negative; the rest are neutral.
    pub negative: f64,
}

impl DiscourseProfile {
    fn new(topics: [f64; 5], positive: f64, negative: f64) -> Self {
        Self { topic_weights: Topic::ALL.into_iter().zip(topics).collect(), positive, negative }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySpec {
    pub community: String,
    pub n_channels: usize,
    #[serde(default = "default_attribute_key")]
    pub attribute_key: String,
    /// Attribute value -> share of channels; must sum to 1.
    pub attribute_ratios: BTreeMap<String, f64>,
    /// Spread as evenly as possible over channels.
    pub total_videos: usize,
    /// Rank-size exponent of channel baseline viewership.
    pub power_law_exponent: f64,
    /// Baseline views of the rank-1 channel.
    pub top_channel_views: f64,
    /// Log-normal sigma of per-video view noise.
    pub view_noise: f64,
    /// Two-way collaboration videos over all videos.
    pub two_way_share: f64,
    /// Two-way videos over all collaboration videos, in (0, 1].
    pub two_way_fraction: f64,
    pub n_dyads: usize,
    /// Dyad type -> relative propensity.
    pub dyad_propensity: BTreeMap<String, f64>,
    /// Dyad type -> synergy multiplier on the geometric mean of baselines.
    pub synergy_multipliers: BTreeMap<String, f64>,
    /// Log-normal sigma of the per-dyad multiplier around its type value.
    pub dyad_noise: f64,
    /// Probability a dyad is drawn with the less popular channel as host.
    pub upstream_bias: f64,
    pub audience_size: usize,
    pub mean_comments_per_commenter: f64,
    /// Probability a comment targets the commenter's home channel.
    pub loyalty: f64,
    /// Keyed by dyad type or `"baseline"`; missing classes use baseline.
    pub discourse_profiles: BTreeMap<String, DiscourseProfile>,
    pub seed: u64,
}

fn default_attribute_key() -> String {
    DEFAULT_ATTRIBUTE_KEY.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid community spec: {0}")]
    InvalidSpec(String),
    #[error("infeasible community spec: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Valorant,
    AnimalCrossing,
    DeadByDaylight,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Valorant, Preset::AnimalCrossing, Preset::DeadByDaylight];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Valorant => "valorant",
            Preset::AnimalCrossing => "animal-crossing",
            Preset::DeadByDaylight => "dead-by-daylight",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SimError::InvalidSpec(alloc::format!("unknown preset {s:?}")))
    }
}

fn map<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn default_profiles() -> BTreeMap<String, DiscourseProfile> {
    //                          gameplay env  food appear other
    [
        ("baseline", DiscourseProfile::new([0.40, 0.10, 0.05, 0.05, 0.40], 0.45, 0.15)),
        ("M-M", DiscourseProfile::new([0.55, 0.08, 0.04, 0.03, 0.30], 0.50, 0.15)),
        ("M-W", DiscourseProfile::new([0.40, 0.10, 0.05, 0.15, 0.30], 0.52, 0.14)),
        ("W-M", DiscourseProfile::new([0.35, 0.12, 0.06, 0.17, 0.30], 0.56, 0.12)),
        ("W-W", DiscourseProfile::new([0.25, 0.15, 0.10, 0.25, 0.25], 0.62, 0.10)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl CommunitySpec {
    /// Full-scale presets: 50 channels with realistic gender splits
    /// and video counts, collaboration shares, and synergy multipliers
    /// spaced 2x apart or more.
    pub fn preset(preset: Preset, seed: u64) -> Self {
        let base = Self {
            community: preset.name().to_string(),
            n_channels: 50,
            attribute_key: default_attribute_key(),
            attribute_ratios: map([("M", 0.84), ("W", 0.16)]),
            total_videos: 13_471,
            power_law_exponent: 0.8,
            top_channel_views: 1_500_000.0,
            view_noise: 0.35,
            two_way_share: 0.0443,
            two_way_fraction: 0.696,
            n_dyads: 120,
            dyad_propensity: map([("M-M", 0.5), ("W-M", 0.2), ("M-W", 0.2), ("W-W", 0.1)]),
            synergy_multipliers: map([("M-M", 8.0), ("W-M", 4.0), ("W-W", 2.0), ("M-W", 1.0)]),
            dyad_noise: 0.15,
            upstream_bias: 0.75,
            audience_size: 3_000,
            mean_comments_per_commenter: 6.0,
            loyalty: 0.85,
            discourse_profiles: default_profiles(),
            seed,
        };
        match preset {
            Preset::Valorant => base,
            Preset::AnimalCrossing => Self {
                attribute_ratios: map([("M", 0.30), ("W", 0.70)]),
                total_videos: 13_367,
                top_channel_views: 900_000.0,
                two_way_share: 0.0218,
                n_dyads: 60,
                dyad_propensity: map([("W-W", 0.45), ("M-W", 0.25), ("W-M", 0.1), ("M-M", 0.2)]),
                synergy_multipliers: map([("W-W", 10.0), ("W-M", 4.0), ("M-W", 2.0), ("M-M", 1.0)]),
                upstream_bias: 0.3,
                loyalty: 0.5,
                ..base
            },
            Preset::DeadByDaylight => Self {
                total_videos: 15_538,
                top_channel_views: 700_000.0,
                two_way_share: 0.0214,
                n_dyads: 70,
                dyad_propensity: map([("M-M", 0.6), ("M-W", 0.2), ("W-M", 0.2), ("W-W", 0.0)]),
                synergy_multipliers: map([("M-W", 12.0), ("M-M", 5.0), ("W-M", 1.0)]),
                upstream_bias: 0.7,
                loyalty: 0.35,
                ..base
            },
        }
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |msg: String| Err(SimError::InvalidSpec(msg));
        let ratio_sum: f64 = self.attribute_ratios.values().sum();
        if self.attribute_ratios.values().any(|&r| !(r >= 0.0)) || (ratio_sum - 1.0).abs() > 1e-9 {
            return invalid(alloc::format!("attribute ratios must be nonnegative and sum to 1, got {ratio_sum}"));
        }
        if self.n_channels > 0 && self.attribute_ratios.is_empty() {
            return invalid("attribute ratios are empty".into());
        }
        for (t, &m) in &self.synergy_multipliers {
            if !(m > 0.0) || !m.is_finite() {
                return invalid(alloc::format!("multiplier for {t} must be positive, got {m}"));
            }
        }
        for (t, &p) in &self.dyad_propensity {
            if !(p >= 0.0) {
                return invalid(alloc::format!("propensity for {t} must be nonnegative"));
            }
            if p > 0.0 && !self.synergy_multipliers.contains_key(t) {
                return invalid(alloc::format!("dyad type {t} has propensity but no multiplier"));
            }
        }
        let unit = |name: &str, v: f64| -> Result<(), SimError> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(SimError::InvalidSpec(alloc::format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        unit("loyalty", self.loyalty)?;
        unit("upstream_bias", self.upstream_bias)?;
        unit("two_way_share", self.two_way_share)?;
        if !(self.two_way_fraction > 0.0 && self.two_way_fraction <= 1.0) {
            return invalid("two_way_fraction must lie in (0, 1]".into());
        }
        if !(self.power_law_exponent >= 0.0) || !(self.top_channel_views > 0.0) {
            return invalid("power-law exponent must be >= 0 and top views > 0".into());
        }
        if !(self.view_noise >= 0.0) || !(self.dyad_noise >= 0.0) {
            return invalid("noise sigmas must be >= 0".into());
        }
        if self.audience_size > 0 && !(self.mean_comments_per_commenter >= 1.0) {
            return invalid("mean comments per commenter must be >= 1".into());
        }
        for (k, p) in &self.discourse_profiles {
            if p.positive < 0.0 || p.negative < 0.0 || p.positive + p.negative > 1.0 + 1e-12 {
                return invalid(alloc::format!("sentiment probabilities of profile {k} are invalid"));
            }
            if p.topic_weights.values().any(|&w| w < 0.0) || p.topic_weights.values().sum::<f64>() <= 0.0 {
                return invalid(alloc::format!("topic weights of profile {k} are invalid"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedDyad {
    pub host: ChannelId,
    pub guest: ChannelId,
    pub dyad_type: String,
    /// Type multiplier times this dyad's own noise factor.
    pub multiplier: f64,
    /// Publication order.
    pub videos: Vec<VideoId>,
}

/// Everything the generator decided, derivable from the spec and seed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PlantedTruth {
    pub community: String,
    pub seed: u64,
    pub attribute_key: String,
    pub attribute_histogram: BTreeMap<String, usize>,
    /// Baseline scale each channel's views were drawn around.
    pub channel_scales: BTreeMap<ChannelId, f64>,
    pub type_multipliers: BTreeMap<String, f64>,
    /// Dyad types that received dyads, by planted multiplier, highest first.
    pub ranking: Vec<String>,
    /// Sorted by `(host, guest)`.
    pub dyads: Vec<PlantedDyad>,
    pub multi_way_videos: BTreeSet<VideoId>,
    pub total_videos: usize,
    pub two_way_videos: usize,
    pub loyalty: f64,
}

impl PlantedTruth {
    /// Two-way over all collaboration videos.
    pub fn two_way_fraction(&self) -> Option<crate::Rational> {
        let all = self.two_way_videos + self.multi_way_videos.len();
        (all > 0).then(|| crate::Rational::new(self.two_way_videos as i128, all as i128))
    }

    pub fn collaboration_videos(&self) -> BTreeSet<VideoId> {
        let mut all = self.multi_way_videos.clone();
        for d in &self.dyads {
            all.extend(d.videos.iter().cloned());
        }
        all
    }
}
