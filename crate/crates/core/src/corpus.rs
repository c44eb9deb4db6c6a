//! Canonical data model, row-level validation and viewership baselines.
//!
//! Parsing lives in the companion crate; this module receives already
//! decoded rows tagged with their source line, decides which of them are
//! admitted, and reports every rejected row instead of aborting.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

pub type ChannelId = String;
pub type VideoId = String;

/// Attribute used to label dyads unless a run says otherwise.
pub const DEFAULT_ATTRIBUTE_KEY: &str = "gender";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub channel_id: ChannelId,
    pub handles: Vec<String>,
    pub display_name: String,
    pub attributes: BTreeMap<String, String>,
    pub community: String,
}

impl ChannelRecord {
    pub fn attribute(&self, key: &str) -> Option<&str> {
        self.attributes.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VideoRecord {
    pub video_id: VideoId,
    pub channel_id: ChannelId,
    pub published_at: DateTime<Utc>,
    pub title: String,
    pub description: String,
    pub view_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub like_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentRecord {
    pub comment_id: String,
    pub video_id: VideoId,
    pub author_id: String,
    pub text: String,
    pub published_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub like_count: Option<u64>,
}

/// Lowercase, strip surrounding whitespace and any leading `@`.
pub fn normalize_handle(raw: &str) -> String {
    raw.trim().trim_start_matches('@').trim().to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegistryIssue {
    DuplicateChannelId { channel_id: ChannelId },
    DuplicateHandle { handle: String, channel_ids: Vec<ChannelId> },
    EmptyHandle { channel_id: ChannelId },
    NoHandles { channel_id: ChannelId },
    MissingAttribute { channel_id: ChannelId, key: String },
}

impl fmt::Display for RegistryIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateChannelId { channel_id } => {
                write!(f, "duplicate channel_id {channel_id}")
            }
            Self::DuplicateHandle { handle, channel_ids } => {
                write!(f, "handle {handle:?} claimed by channels {}", channel_ids.join(", "))
            }
            Self::EmptyHandle { channel_id } => write!(f, "channel {channel_id} has an empty handle"),
            Self::NoHandles { channel_id } => write!(f, "channel {channel_id} has no handles"),
            Self::MissingAttribute { channel_id, key } => {
                write!(f, "channel {channel_id} is missing attribute {key:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("registry validation failed: {}", join_issues(.issues))]
pub struct RegistryError {
    pub issues: Vec<RegistryIssue>,
}

fn join_issues(issues: &[RegistryIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Normalizes handles and checks registry-wide uniqueness. Every problem is
/// collected before failing so the caller sees all offenders at once.
pub fn validate_registry(
    mut records: Vec<ChannelRecord>,
    attribute_key: &str,
) -> Result<Vec<ChannelRecord>, RegistryError> {
    let mut issues = Vec::new();
    let mut seen_ids = BTreeSet::new();
    let mut handle_owners: BTreeMap<String, Vec<ChannelId>> = BTreeMap::new();

    for record in &mut records {
        if !seen_ids.insert(record.channel_id.clone()) {
            issues.push(RegistryIssue::DuplicateChannelId { channel_id: record.channel_id.clone() });
        }
        if record.handles.is_empty() {
            issues.push(RegistryIssue::NoHandles { channel_id: record.channel_id.clone() });
        }
        let mut own = BTreeSet::new();
        let mut normalized = Vec::with_capacity(record.handles.len());
        for raw in &record.handles {
            let handle = normalize_handle(raw);
            if handle.is_empty() {
                issues.push(RegistryIssue::EmptyHandle { channel_id: record.channel_id.clone() });
                continue;
            }
            // the same channel listing a handle twice is harmless
            if own.insert(handle.clone()) {
                handle_owners.entry(handle.clone()).or_default().push(record.channel_id.clone());
                normalized.push(handle);
            }
        }
        record.handles = normalized;
        if record.attribute(attribute_key).is_none() {
            issues.push(RegistryIssue::MissingAttribute {
                channel_id: record.channel_id.clone(),
                key: attribute_key.to_string(),
            });
        }
    }
    for (handle, channel_ids) in handle_owners {
        if channel_ids.len() > 1 {
            issues.push(RegistryIssue::DuplicateHandle { handle, channel_ids });
        }
    }

    if issues.is_empty() {
        Ok(records)
    } else {
        Err(RegistryError { issues })
    }
}

/// Histogram of one attribute over the registry.
pub fn attribute_histogram(registry: &[ChannelRecord], key: &str) -> BTreeMap<String, usize> {
    let mut hist = BTreeMap::new();
    for record in registry {
        if let Some(value) = record.attribute(key) {
            *hist.entry(value.to_string()).or_insert(0) += 1;
        }
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowErrorKind {
    Malformed { message: String },
    NegativeViewCount { value: i64 },
    UnknownChannel { channel_id: ChannelId },
    DuplicateId { id: String },
}

impl fmt::Display for RowErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed { message } => write!(f, "malformed row: {message}"),
            Self::NegativeViewCount { value } => write!(f, "negative view_count {value}"),
            Self::UnknownChannel { channel_id } => write!(f, "unknown channel_id {channel_id}"),
            Self::DuplicateId { id } => write!(f, "duplicate id {id}"),
        }
    }
}

/// One rejected input row. `line` is 1-based in the source file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub line: u64,
    #[serde(flatten)]
    pub kind: RowErrorKind,
}

/// A comment whose `video_id` did not resolve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orphan {
    pub line: u64,
    pub comment: CommentRecord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admitted<T> {
    pub records: Vec<T>,
    pub errors: Vec<RowError>,
    pub orphans: Vec<Orphan>,
}

impl<T> Default for Admitted<T> {
    fn default() -> Self {
        Self { records: Vec::new(), errors: Vec::new(), orphans: Vec::new() }
    }
}

/// Admits decoded video rows against the registry, first occurrence wins on
/// duplicate ids. Output is sorted by `(channel_id, published_at, video_id)`.
pub fn admit_videos(
    rows: impl IntoIterator<Item = (u64, VideoRecord)>,
    registry: &[ChannelRecord],
) -> Admitted<VideoRecord> {
    let known: BTreeSet<&str> = registry.iter().map(|c| c.channel_id.as_str()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Admitted::default();
    for (line, video) in rows {
        if !known.contains(video.channel_id.as_str()) {
            out.errors.push(RowError {
                line,
                kind: RowErrorKind::UnknownChannel { channel_id: video.channel_id },
            });
        } else if !seen.insert(video.video_id.clone()) {
            out.errors.push(RowError { line, kind: RowErrorKind::DuplicateId { id: video.video_id } });
        } else {
            out.records.push(video);
        }
    }
    sort_videos(&mut out.records);
    out
}

pub fn sort_videos(videos: &mut [VideoRecord]) {
    videos.sort_by(|a, b| {
        (&a.channel_id, a.published_at, &a.video_id).cmp(&(&b.channel_id, b.published_at, &b.video_id))
    });
}

/// Admits comment rows. Unknown videos go to the orphan report; duplicate
/// comment ids after the first are row errors. Input order is preserved.
pub fn admit_comments(
    rows: impl IntoIterator<Item = (u64, CommentRecord)>,
    videos: &[VideoRecord],
) -> Admitted<CommentRecord> {
    let known: BTreeSet<&str> = videos.iter().map(|v| v.video_id.as_str()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Admitted::default();
    for (line, comment) in rows {
        if !seen.insert(comment.comment_id.clone()) {
            out.errors.push(RowError { line, kind: RowErrorKind::DuplicateId { id: comment.comment_id } });
        } else if !known.contains(comment.video_id.as_str()) {
            out.orphans.push(Orphan { line, comment });
        } else {
            out.records.push(comment);
        }
    }
    out
}

/// Keeps the `limit` most recent videos of every channel.
pub fn cap_recent_videos(videos: &mut Vec<VideoRecord>, limit: usize) {
    let mut by_channel: BTreeMap<&str, Vec<(DateTime<Utc>, &str)>> = BTreeMap::new();
    for v in videos.iter() {
        by_channel.entry(&v.channel_id).or_default().push((v.published_at, &v.video_id));
    }
    let mut keep = BTreeSet::new();
    for list in by_channel.values_mut() {
        list.sort_by(|a, b| b.cmp(a));
        keep.extend(list.iter().take(limit).map(|(_, id)| String::from(*id)));
    }
    videos.retain(|v| keep.contains(&v.video_id));
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("channel {channel_id} belongs to community {found:?}, corpus is {expected:?}")]
    MixedCommunity { channel_id: ChannelId, expected: String, found: String },
    #[error("video {video_id} references unknown channel {channel_id}")]
    DanglingVideo { video_id: VideoId, channel_id: ChannelId },
    #[error("comment {comment_id} references unknown video {video_id}")]
    DanglingComment { comment_id: String, video_id: VideoId },
}

/// Registry, videos and comments of a single community.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub community: String,
    pub registry: Vec<ChannelRecord>,
    pub videos: Vec<VideoRecord>,
    pub comments: Vec<CommentRecord>,
}

impl Corpus {
    /// Checks referential integrity and the single-community rule.
    pub fn new(
        community: impl Into<String>,
        registry: Vec<ChannelRecord>,
        videos: Vec<VideoRecord>,
        comments: Vec<CommentRecord>,
    ) -> Result<Self, CorpusError> {
        let community = community.into();
        for c in &registry {
            if c.community != community {
                return Err(CorpusError::MixedCommunity {
                    channel_id: c.channel_id.clone(),
                    expected: community,
                    found: c.community.clone(),
                });
            }
        }
        let channels: BTreeSet<&str> = registry.iter().map(|c| c.channel_id.as_str()).collect();
        for v in &videos {
            if !channels.contains(v.channel_id.as_str()) {
                return Err(CorpusError::DanglingVideo {
                    video_id: v.video_id.clone(),
                    channel_id: v.channel_id.clone(),
                });
            }
        }
        let video_ids: BTreeSet<&str> = videos.iter().map(|v| v.video_id.as_str()).collect();
        for c in &comments {
            if !video_ids.contains(c.video_id.as_str()) {
                return Err(CorpusError::DanglingComment {
                    comment_id: c.comment_id.clone(),
                    video_id: c.video_id.clone(),
                });
            }
        }
        Ok(Self { community, registry, videos, comments })
    }

    pub fn channel(&self, channel_id: &str) -> Option<&ChannelRecord> {
        self.registry.iter().find(|c| c.channel_id == channel_id)
    }

    /// video_id -> owning channel_id
    pub fn video_owners(&self) -> BTreeMap<&str, &str> {
        self.videos.iter().map(|v| (v.video_id.as_str(), v.channel_id.as_str())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("no baseline for channel {channel_id}: no videos left after exclusion")]
    NoBaseline { channel_id: ChannelId },
}

/// Median of exact integers; even counts take the rational midpoint.
pub fn median_views(views: &mut [u64]) -> Option<Rational> {
    if views.is_empty() {
        return None;
    }
    views.sort_unstable();
    let mid = views.len() / 2;
    if views.len() % 2 == 1 {
        Some(rational::from_u64(views[mid]))
    } else {
        Some(Rational::new(views[mid - 1] as i128 + views[mid] as i128, 2))
    }
}

/// Median view count of `channel_id`'s videos that are not in `exclude`.
pub fn channel_baseline(
    channel_id: &str,
    videos: &[VideoRecord],
    exclude: &BTreeSet<VideoId>,
) -> Result<Rational, BaselineError> {
    let mut views: Vec<u64> = videos
        .iter()
        .filter(|v| v.channel_id == channel_id && !exclude.contains(&v.video_id))
        .map(|v| v.view_count)
        .collect();
    median_views(&mut views).ok_or_else(|| BaselineError::NoBaseline { channel_id: channel_id.to_string() })
}

/// Which videos feed a channel's baseline.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMode {
    /// Drop the channel's own collaboration videos (two-way and multi-way).
    #[default]
    ExcludeCollaborations,
    AllVideos,
}

/// Per-channel baselines for a whole registry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Baselines {
    values: BTreeMap<ChannelId, Rational>,
    missing: BTreeSet<ChannelId>,
}

impl Baselines {
    /// One pass over `videos`; channels with nothing left after exclusion
    /// are recorded as missing rather than zero.
    pub fn compute(registry: &[ChannelRecord], videos: &[VideoRecord], exclude: &BTreeSet<VideoId>) -> Self {
        let mut views: BTreeMap<&str, Vec<u64>> =
            registry.iter().map(|c| (c.channel_id.as_str(), Vec::new())).collect();
        for v in videos {
            if exclude.contains(&v.video_id) {
                continue;
            }
            if let Some(list) = views.get_mut(v.channel_id.as_str()) {
                list.push(v.view_count);
            }
        }
        let mut out = Self::default();
        for (channel, mut list) in views {
            match median_views(&mut list) {
                Some(m) => {
                    out.values.insert(channel.to_string(), m);
                }
                None => {
                    out.missing.insert(channel.to_string());
                }
            }
        }
        out
    }

    pub fn from_values(values: BTreeMap<ChannelId, Rational>) -> Self {
        Self { values, missing: BTreeSet::new() }
    }

    pub fn get(&self, channel_id: &str) -> Result<Rational, BaselineError> {
        self.values
            .get(channel_id)
            .copied()
            .ok_or_else(|| BaselineError::NoBaseline { channel_id: channel_id.to_string() })
    }

    pub fn insert(&mut self, channel_id: ChannelId, value: Rational) {
        self.missing.remove(&channel_id);
        self.values.insert(channel_id, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ChannelId, &Rational)> {
        self.values.iter()
    }

    pub fn missing(&self) -> &BTreeSet<ChannelId> {
        &self.missing
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use chrono::TimeZone;
    use proptest::prelude::*;

    fn channel(id: &str, handles: &[&str], gender: &str) -> ChannelRecord {
        ChannelRecord {
            channel_id: id.into(),
            handles: handles.iter().map(|h| h.to_string()).collect(),
            display_name: id.into(),
            attributes: [("gender".to_string(), gender.to_string())].into_iter().collect(),
            community: "test".into(),
        }
    }

    fn video(id: &str, channel: &str, day: u32, views: u64) -> VideoRecord {
        VideoRecord {
            video_id: id.into(),
            channel_id: channel.into(),
            published_at: Utc.with_ymd_and_hms(2024, 1, day, 0, 0, 0).unwrap(),
            title: String::new(),
            description: String::new(),
            view_count: views,
            like_count: None,
            comment_count: None,
        }
    }

    #[test]
    fn normalization_rule() {
        assert_eq!(normalize_handle("  @GuestChan "), "guestchan");
        assert_eq!(normalize_handle("guestchan"), "guestchan");
    }

    #[test]
    fn handle_collision_names_both_channels() {
        let err = validate_registry(
            vec![channel("c1", &["@GuestChan"], "M"), channel("c2", &["guestchan"], "W")],
            "gender",
        )
        .unwrap_err();
        assert_eq!(
            err.issues,
            vec![RegistryIssue::DuplicateHandle {
                handle: "guestchan".into(),
                channel_ids: vec!["c1".into(), "c2".into()],
            }]
        );
    }

    #[test]
    fn missing_attribute_and_duplicate_id() {
        let mut no_gender = channel("c2", &["b"], "M");
        no_gender.attributes.clear();
        let err = validate_registry(vec![channel("c1", &["a"], "M"), no_gender, channel("c1", &["c"], "W")], "gender")
            .unwrap_err();
        assert!(err.issues.contains(&RegistryIssue::MissingAttribute { channel_id: "c2".into(), key: "gender".into() }));
        assert!(err.issues.contains(&RegistryIssue::DuplicateChannelId { channel_id: "c1".into() }));
    }

    #[test]
    fn histogram_of_valorant_sized_registry() {
        let registry: Vec<_> = (0..50)
            .map(|i| {
                let handle = alloc::format!("h{i}");
                channel(&alloc::format!("c{i}"), &[handle.as_str()], if i < 42 { "M" } else { "W" })
            })
            .collect();
        let registry = validate_registry(registry, "gender").unwrap();
        let hist = attribute_histogram(&registry, "gender");
        assert_eq!(hist.get("M"), Some(&42));
        assert_eq!(hist.get("W"), Some(&8));
    }

    #[test]
    fn videos_sorted_and_unknown_rejected() {
        let registry = vec![channel("a", &["a"], "M"), channel("b", &["b"], "W")];
        let rows = vec![
            (2, video("v3", "b", 1, 5)),
            (3, video("v2", "a", 3, 5)),
            (4, video("v1", "a", 2, 5)),
            (5, video("v9", "zzz", 2, 5)),
            (6, video("v1", "a", 9, 5)),
        ];
        let out = admit_videos(rows, &registry);
        let ids: Vec<_> = out.records.iter().map(|v| v.video_id.as_str()).collect();
        assert_eq!(ids, ["v1", "v2", "v3"]);
        assert_eq!(out.errors.len(), 2);
        assert_eq!(out.errors[0].line, 5);
        assert!(matches!(out.errors[1].kind, RowErrorKind::DuplicateId { .. }));
    }

    #[test]
    fn comments_orphans_and_duplicates() {
        let videos = vec![video("v1", "a", 1, 1)];
        let comment = |id: &str, vid: &str, text: &str| CommentRecord {
            comment_id: id.into(),
            video_id: vid.into(),
            author_id: "u".into(),
            text: text.into(),
            published_at: Utc.with_ymd_and_hms(2024, 2, 1, 0, 0, 0).unwrap(),
            like_count: None,
        };
        let rows = vec![
            (2, comment("k1", "v1", "hi")),
            (3, comment("k2", "v1", "")),
            (4, comment("k3", "v404", "lost")),
            (5, comment("k4", "v1", "x")),
            (6, comment("k5", "v1", "y")),
            (7, comment("k5", "v1", "again")),
        ];
        let out = admit_comments(rows, &videos);
        assert_eq!(out.records.len(), 4);
        assert_eq!(out.orphans.len(), 1);
        assert_eq!(out.orphans[0].line, 4);
        assert_eq!(out.errors.len(), 1);
        assert_eq!(out.records[1].text, "");
    }

    #[test]
    fn baseline_examples() {
        let vids = vec![video("a", "c", 1, 100), video("b", "c", 2, 300), video("d", "c", 3, 200)];
        assert_eq!(channel_baseline("c", &vids, &BTreeSet::new()), Ok(Rational::from_integer(200)));
        let vids4 = vec![video("a", "c", 1, 100), video("b", "c", 2, 200), video("d", "c", 3, 300), video("e", "c", 4, 400)];
        assert_eq!(channel_baseline("c", &vids4, &BTreeSet::new()), Ok(Rational::from_integer(250)));
        let two = vec![video("a", "c", 1, 100), video("b", "c", 2, 200)];
        let exclude: BTreeSet<_> = ["a".to_string(), "b".to_string()].into_iter().collect();
        assert_eq!(
            channel_baseline("c", &two, &exclude),
            Err(BaselineError::NoBaseline { channel_id: "c".into() })
        );
    }

    #[test]
    fn baselines_record_missing_channels() {
        let registry = vec![channel("a", &["a"], "M"), channel("b", &["b"], "W")];
        let vids = vec![video("v1", "a", 1, 10), video("v2", "a", 2, 20)];
        let b = Baselines::compute(&registry, &vids, &BTreeSet::new());
        assert_eq!(b.get("a"), Ok(Rational::new(15, 1)));
        assert!(b.get("b").is_err());
        assert!(b.missing().contains("b"));
    }

    #[test]
    fn cap_keeps_most_recent() {
        let mut vids = vec![video("a", "c", 1, 1), video("b", "c", 2, 1), video("d", "c", 3, 1), video("e", "x", 1, 1)];
        cap_recent_videos(&mut vids, 2);
        let ids: Vec<_> = vids.iter().map(|v| v.video_id.as_str()).collect();
        assert_eq!(ids, ["b", "d", "e"]);
    }

    proptest! {
        #[test]
        fn baseline_permutation_invariant_and_scale_equivariant(
            views in proptest::collection::vec(0u64..1_000_000, 1..40),
            scale in 1u64..50,
            seed in any::<u64>(),
        ) {
            let vids: Vec<_> = views.iter().enumerate()
                .map(|(i, &v)| video(&alloc::format!("v{i}"), "c", 1, v)).collect();
            let base = channel_baseline("c", &vids, &BTreeSet::new()).unwrap();

            let mut shuffled = vids.clone();
            let n = shuffled.len();
            for i in 0..n {
                let j = (seed.wrapping_mul(i as u64 + 7) % n as u64) as usize;
                shuffled.swap(i, j);
            }
            prop_assert_eq!(channel_baseline("c", &shuffled, &BTreeSet::new()).unwrap(), base);

            let scaled: Vec<_> = vids.iter().cloned().map(|mut v| { v.view_count *= scale; v }).collect();
            prop_assert_eq!(
                channel_baseline("c", &scaled, &BTreeSet::new()).unwrap(),
                base * Rational::from_integer(scale as i128)
            );
        }
    }
}
