//! Handle mentions, two-way collaboration dyads and share statistics.
//!
//! A registry handle matches when it occurs case-insensitively, optionally
//! after an `@`, with a non-word character or the string edge on both
//! sides. Word characters are alphanumerics and `_`. At one position the
//! longest handle wins and matches never overlap.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ChannelId, ChannelRecord, Corpus, VideoId, VideoRecord};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionHit {
    pub video_id: VideoId,
    pub mentioned_channel_id: ChannelId,
    pub matched_handle: String,
    /// Byte range of the handle text (without `@`) in the description.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollabError {
    #[error("channel {channel_id} has no {key:?} attribute")]
    MissingAttribute { channel_id: ChannelId, key: String },
    #[error("channel {channel_id} is not in the registry")]
    UnknownChannel { channel_id: ChannelId },
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Normalized registry handles bucketed by first character.
#[derive(Debug, Clone, Default)]
pub struct HandleIndex {
    by_first: BTreeMap<char, Vec<(String, ChannelId)>>,
}

impl HandleIndex {
    /// Expects handles already normalized (see [`crate::corpus::validate_registry`]).
    pub fn new(registry: &[ChannelRecord]) -> Self {
        let mut by_first: BTreeMap<char, Vec<(String, ChannelId)>> = BTreeMap::new();
        for channel in registry {
            for handle in &channel.handles {
                if let Some(first) = handle.chars().next() {
                    by_first.entry(first).or_default().push((handle.clone(), channel.channel_id.clone()));
                }
            }
        }
        for list in by_first.values_mut() {
            list.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        }
        Self { by_first }
    }

    /// All non-owner hits in `video.description`, ordered by span start.
    pub fn extract(&self, video: &VideoRecord) -> Vec<MentionHit> {
        let text = video.description.as_str();
        let mut hits = Vec::new();
        let mut prev: Option<char> = None;
        let mut skip_until = 0;
        for (i, c) in text.char_indices() {
            let boundary = prev.is_none_or(|p| !is_word_char(p));
            prev = Some(c);
            if i < skip_until || !boundary {
                continue;
            }
            let Some(first) = c.to_lowercase().next() else { continue };
            let Some(candidates) = self.by_first.get(&first) else { continue };
            for (handle, channel_id) in candidates {
                let Some(end) = match_at(text, i, handle) else { continue };
                if text[end..].chars().next().is_some_and(is_word_char) {
                    continue;
                }
                skip_until = end;
                if *channel_id != video.channel_id {
                    hits.push(MentionHit {
                        video_id: video.video_id.clone(),
                        mentioned_channel_id: channel_id.clone(),
                        matched_handle: handle.clone(),
                        span: (i, end),
                    });
                }
                break;
            }
        }
        hits
    }
}

/// End byte offset if `handle` matches `text` case-insensitively at `start`.
fn match_at(text: &str, start: usize, handle: &str) -> Option<usize> {
    let mut wanted = handle.chars();
    let mut end = start;
    let mut rest = text[start..].char_indices();
    loop {
        let remaining = wanted.as_str();
        if remaining.is_empty() {
            return Some(end);
        }
        let (off, c) = rest.next()?;
        for lc in c.to_lowercase() {
            if wanted.next() != Some(lc) {
                return None;
            }
        }
        end = start + off + c.len_utf8();
    }
}

/// Mentions of other registry channels in one video's description.
pub fn extract_mentions(video: &VideoRecord, registry: &[ChannelRecord]) -> Vec<MentionHit> {
    HandleIndex::new(registry).extract(video)
}

/// Host attribute, hyphen, guest attribute.
pub fn classify_dyad(
    host: &str,
    guest: &str,
    registry: &[ChannelRecord],
    attribute_key: &str,
) -> Result<String, CollabError> {
    let label = |id: &str| -> Result<String, CollabError> {
        let channel = registry
            .iter()
            .find(|c| c.channel_id == id)
            .ok_or_else(|| CollabError::UnknownChannel { channel_id: id.to_string() })?;
        channel.attribute(attribute_key).map(ToString::to_string).ok_or_else(|| CollabError::MissingAttribute {
            channel_id: id.to_string(),
            key: attribute_key.to_string(),
        })
    };
    Ok(dyad_label(&label(host)?, &label(guest)?))
}

pub fn dyad_label(host_value: &str, guest_value: &str) -> String {
    let mut s = String::with_capacity(host_value.len() + guest_value.len() + 1);
    s.push_str(host_value);
    s.push('-');
    s.push_str(guest_value);
    s
}

/// Ordered (host, guest) pair with every two-way video the host posted
/// mentioning exactly that guest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollaborationDyad {
    pub host: ChannelId,
    pub guest: ChannelId,
    pub videos: Vec<VideoId>,
    pub dyad_type: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollabShareStats {
    pub total_videos: usize,
    pub two_way_videos: usize,
    pub multi_way_videos: usize,
    pub videos_by_dyad_type: BTreeMap<String, usize>,
    /// Two-way videos of each type over all videos.
    pub share_by_dyad_type: BTreeMap<String, f64>,
}

impl CollabShareStats {
    pub fn two_way_share(&self) -> f64 {
        if self.total_videos == 0 {
            0.0
        } else {
            self.two_way_videos as f64 / self.total_videos as f64
        }
    }

    /// Two-way videos over all collaboration videos, if there are any.
    pub fn two_way_fraction_of_collaborations(&self) -> Option<Rational> {
        let collabs = self.two_way_videos + self.multi_way_videos;
        (collabs > 0).then(|| Rational::new(self.two_way_videos as i128, collabs as i128))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollabDetection {
    pub dyads: Vec<CollaborationDyad>,
    pub stats: CollabShareStats,
    pub multi_way_videos: BTreeSet<VideoId>,
}

impl CollabDetection {
    /// Every video with at least one registry mention, two-way or not.
    pub fn collaboration_videos(&self) -> BTreeSet<VideoId> {
        let mut all = self.multi_way_videos.clone();
        for d in &self.dyads {
            all.extend(d.videos.iter().cloned());
        }
        all
    }
}

type DatedVideo = (DateTime<Utc>, VideoId);

/// Partial detection state over a subset of videos. Merging is
/// order-independent, so workers can split the video list freely.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DyadAccumulator {
    total_videos: usize,
    dyads: BTreeMap<(ChannelId, ChannelId), BTreeSet<DatedVideo>>,
    multi_way: BTreeSet<VideoId>,
}

impl DyadAccumulator {
    pub fn add_video(&mut self, video: &VideoRecord, index: &HandleIndex) {
        self.total_videos += 1;
        let mentioned: BTreeSet<ChannelId> =
            index.extract(video).into_iter().map(|h| h.mentioned_channel_id).collect();
        match mentioned.len() {
            0 => {}
            1 => {
                let guest = mentioned.into_iter().next().unwrap();
                // sort key keeps publication order inside a dyad
                let key = (video.published_at, video.video_id.clone());
                self.dyads.entry((video.channel_id.clone(), guest)).or_default().insert(key);
            }
            _ => {
                self.multi_way.insert(video.video_id.clone());
            }
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.total_videos += other.total_videos;
        for (pair, vids) in other.dyads {
            self.dyads.entry(pair).or_default().extend(vids);
        }
        self.multi_way.extend(other.multi_way);
        self
    }

    pub fn finish(self, registry: &[ChannelRecord], attribute_key: &str) -> Result<CollabDetection, CollabError> {
        let labels: BTreeMap<&str, Option<&str>> =
            registry.iter().map(|c| (c.channel_id.as_str(), c.attribute(attribute_key))).collect();
        let label = |id: &str| -> Result<&str, CollabError> {
            match labels.get(id) {
                Some(Some(v)) => Ok(*v),
                Some(None) => Err(CollabError::MissingAttribute {
                    channel_id: id.to_string(),
                    key: attribute_key.to_string(),
                }),
                None => Err(CollabError::UnknownChannel { channel_id: id.to_string() }),
            }
        };

        let mut dyads = Vec::with_capacity(self.dyads.len());
        let mut videos_by_type: BTreeMap<String, usize> = BTreeMap::new();
        let mut two_way = 0;
        for ((host, guest), vids) in self.dyads {
            let dyad_type = dyad_label(label(&host)?, label(&guest)?);
            two_way += vids.len();
            *videos_by_type.entry(dyad_type.clone()).or_insert(0) += vids.len();
            dyads.push(CollaborationDyad {
                host,
                guest,
                videos: vids.into_iter().map(|(_, id)| id).collect(),
                dyad_type,
            });
        }
        let total = self.total_videos;
        let share_by_dyad_type = videos_by_type
            .iter()
            .map(|(t, &n)| (t.clone(), if total == 0 { 0.0 } else { n as f64 / total as f64 }))
            .collect();
        Ok(CollabDetection {
            dyads,
            stats: CollabShareStats {
                total_videos: total,
                two_way_videos: two_way,
                multi_way_videos: self.multi_way.len(),
                videos_by_dyad_type: videos_by_type,
                share_by_dyad_type,
            },
            multi_way_videos: self.multi_way,
        })
    }
}

/// Two-way dyads and share statistics for a whole corpus. Dyads come out
/// sorted by `(host, guest)`; `(A, B)` and `(B, A)` stay distinct.
pub fn detect_collaborations(corpus: &Corpus, attribute_key: &str) -> Result<CollabDetection, CollabError> {
    let index = HandleIndex::new(&corpus.registry);
    let mut acc = DyadAccumulator::default();
    for video in &corpus.videos {
        acc.add_video(video, &index);
    }
    acc.finish(&corpus.registry, attribute_key)
}
