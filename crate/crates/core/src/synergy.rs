//! Two-way Shapley contributions per dyad, aggregation by dyad type and
//! reciprocity of popularity between hosts and guests.
//!
//! For a dyad with host A and guest B over N collaboration videos:
//!
//! ```text
//! shap2(A) = mean(V_i) - median(B)     shapn(A) = shap2(A) / median(B) - 1
//! shap2(B) = mean(V_i) - median(A)     shapn(B) = shap2(B) / median(A) - 1
//! ```
//!
//! Everything is exact over [`Rational`]; floats appear only when reports
//! are rendered. `lift = mean(V_i) / median(partner) - 1` is carried along
//! as the plain ratio reading.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collab::CollaborationDyad;
use crate::corpus::{BaselineError, Baselines, ChannelId, VideoRecord};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawShapley {
    pub dyad: CollaborationDyad,
    pub n_videos: usize,
    pub mean_collab_views: Rational,
    pub baseline_host: Rational,
    pub baseline_guest: Rational,
    pub shap2_host: Rational,
    pub shap2_guest: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadSynergy {
    pub dyad: CollaborationDyad,
    pub n_videos: usize,
    pub mean_collab_views: Rational,
    pub baseline_host: Rational,
    pub baseline_guest: Rational,
    pub shap2_host: Rational,
    pub shap2_guest: Rational,
    pub shapn_host: Rational,
    pub shapn_guest: Rational,
    pub lift_host: Rational,
    pub lift_guest: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynergyError {
    #[error(transparent)]
    MissingBaseline(#[from] BaselineError),
    #[error("dyad {host}->{guest} has no videos")]
    EmptyDyad { host: ChannelId, guest: ChannelId },
    #[error("video {video_id} not found")]
    UnknownVideo { video_id: String },
    #[error("baseline of {channel_id} is zero; normalized values undefined")]
    ZeroBaseline { channel_id: ChannelId, raw: Box<RawShapley> },
}

/// video_id -> view_count
pub fn view_index(videos: &[VideoRecord]) -> BTreeMap<&str, u64> {
    videos.iter().map(|v| (v.video_id.as_str(), v.view_count)).collect()
}

pub fn raw_shapley(
    dyad: &CollaborationDyad,
    views: &BTreeMap<&str, u64>,
    baselines: &Baselines,
) -> Result<RawShapley, SynergyError> {
    if dyad.videos.is_empty() {
        return Err(SynergyError::EmptyDyad { host: dyad.host.clone(), guest: dyad.guest.clone() });
    }
    let baseline_host = baselines.get(&dyad.host)?;
    let baseline_guest = baselines.get(&dyad.guest)?;
    let mut total: i128 = 0;
    for id in &dyad.videos {
        let v = views
            .get(id.as_str())
            .ok_or_else(|| SynergyError::UnknownVideo { video_id: id.clone() })?;
        total += *v as i128;
    }
    let n = dyad.videos.len();
    let mean = Rational::new(total, n as i128);
    Ok(RawShapley {
        dyad: dyad.clone(),
        n_videos: n,
        mean_collab_views: mean,
        baseline_host,
        baseline_guest,
        shap2_host: mean - baseline_guest,
        shap2_guest: mean - baseline_host,
    })
}

pub fn dyad_synergy(
    dyad: &CollaborationDyad,
    views: &BTreeMap<&str, u64>,
    baselines: &Baselines,
) -> Result<DyadSynergy, SynergyError> {
    normalize(raw_shapley(dyad, views, baselines)?)
}

/// Applies the normalization to raw contributions. A zero baseline on
/// either side is a division-guard error that still carries the raw values.
pub fn normalize(raw: RawShapley) -> Result<DyadSynergy, SynergyError> {
    let zero = if raw.baseline_guest.is_zero() {
        Some(raw.dyad.guest.clone())
    } else if raw.baseline_host.is_zero() {
        Some(raw.dyad.host.clone())
    } else {
        None
    };
    if let Some(channel_id) = zero {
        return Err(SynergyError::ZeroBaseline { channel_id, raw: Box::new(raw) });
    }
    let one = Rational::from_integer(1);
    Ok(DyadSynergy {
        shapn_host: raw.shap2_host / raw.baseline_guest - one,
        shapn_guest: raw.shap2_guest / raw.baseline_host - one,
        lift_host: raw.mean_collab_views / raw.baseline_guest - one,
        lift_guest: raw.mean_collab_views / raw.baseline_host - one,
        dyad: raw.dyad,
        n_videos: raw.n_videos,
        mean_collab_views: raw.mean_collab_views,
        baseline_host: raw.baseline_host,
        baseline_guest: raw.baseline_guest,
        shap2_host: raw.shap2_host,
        shap2_guest: raw.shap2_guest,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedDyad {
    pub host: ChannelId,
    pub guest: ChannelId,
    pub reason: String,
}

/// Outcome of scoring every dyad of a community.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SynergyRun {
    /// Fully normalized dyads; these feed the aggregates.
    pub synergies: Vec<DyadSynergy>,
    /// Dyads with a zero baseline: raw values only.
    pub raw_only: Vec<RawShapley>,
    /// Dyads that could not be scored at all.
    pub skipped: Vec<SkippedDyad>,
}

pub fn compute_synergies(dyads: &[CollaborationDyad], videos: &[VideoRecord], baselines: &Baselines) -> SynergyRun {
    let views = view_index(videos);
    let mut run = SynergyRun::default();
    for dyad in dyads {
        match dyad_synergy(dyad, &views, baselines) {
            Ok(s) => run.synergies.push(s),
            Err(SynergyError::ZeroBaseline { channel_id, raw }) => {
                log::info!("dyad {}->{} kept raw only: zero baseline for {channel_id}", dyad.host, dyad.guest);
                run.raw_only.push(*raw);
            }
            Err(e) => {
                log::info!("dyad {}->{} skipped: {e}", dyad.host, dyad.guest);
                run.skipped.push(SkippedDyad {
                    host: dyad.host.clone(),
                    guest: dyad.guest.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    run
}

/// Central tendency used across dyads of one type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Median,
    Mean,
}

impl Aggregation {
    pub fn apply(self, values: &mut [Rational]) -> Option<Rational> {
        match self {
            Self::Median => rational::median(values),
            Self::Mean => rational::mean(values),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Median => "median",
            Self::Mean => "mean",
        }
    }
}

/// Raw values of one dyad type; merging concatenates, so the median can be
/// taken over the full multiset at the end.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeAccumulator {
    shapn_host: Vec<Rational>,
    shapn_guest: Vec<Rational>,
    lift_host: Vec<Rational>,
    lift_guest: Vec<Rational>,
    videos: usize,
}

impl TypeAccumulator {
    pub fn push(&mut self, s: &DyadSynergy) {
        self.shapn_host.push(s.shapn_host);
        self.shapn_guest.push(s.shapn_guest);
        self.lift_host.push(s.lift_host);
        self.lift_guest.push(s.lift_guest);
        self.videos += s.n_videos;
    }

    pub fn merge(&mut self, other: Self) {
        self.shapn_host.extend(other.shapn_host);
        self.shapn_guest.extend(other.shapn_guest);
        self.lift_host.extend(other.lift_host);
        self.lift_guest.extend(other.lift_guest);
        self.videos += other.videos;
    }

    fn finish(mut self, stat: Aggregation) -> Option<TypeAggregate> {
        Some(TypeAggregate {
            dyads: self.shapn_host.len(),
            videos: self.videos,
            shapn_host: stat.apply(&mut self.shapn_host)?,
            shapn_guest: stat.apply(&mut self.shapn_guest)?,
            lift_host: stat.apply(&mut self.lift_host)?,
            lift_guest: stat.apply(&mut self.lift_guest)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAggregate {
    pub shapn_host: Rational,
    pub shapn_guest: Rational,
    pub lift_host: Rational,
    pub lift_guest: Rational,
    pub dyads: usize,
    pub videos: usize,
}

/// One community's row of the synergy tables. Dyad types without scored
/// dyads have no entry in `rows`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynergyReport {
    pub community: String,
    pub aggregation: Aggregation,
    pub rows: BTreeMap<String, TypeAggregate>,
}

impl SynergyReport {
    pub fn get(&self, dyad_type: &str) -> Option<&TypeAggregate> {
        self.rows.get(dyad_type)
    }

    /// Dyad types ordered by aggregated host contribution, highest first.
    pub fn host_ranking(&self) -> Vec<String> {
        let mut types: Vec<_> = self.rows.iter().collect();
        types.sort_by(|a, b| b.1.shapn_host.cmp(&a.1.shapn_host).then_with(|| a.0.cmp(b.0)));
        types.into_iter().map(|(t, _)| t.clone()).collect()
    }
}

pub fn aggregate_by_dyad_type(
    community: &str,
    synergies: &[DyadSynergy],
    stat: Aggregation,
) -> SynergyReport {
    let mut acc: BTreeMap<String, TypeAccumulator> = BTreeMap::new();
    for s in synergies {
        acc.entry(s.dyad.dyad_type.clone()).or_default().push(s);
    }
    SynergyReport {
        community: community.to_string(),
        aggregation: stat,
        rows: acc.into_iter().filter_map(|(t, a)| a.finish(stat).map(|agg| (t, agg))).collect(),
    }
}

/// Per-video comparison of host and guest baselines.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityStats {
    pub community: String,
    pub host_greater: usize,
    pub guest_greater: usize,
    pub tied: usize,
    /// Collaboration videos skipped because a baseline was missing.
    pub excluded_videos: usize,
}

impl ReciprocityStats {
    pub fn counted(&self) -> usize {
        self.host_greater + self.guest_greater + self.tied
    }

    /// `(host greater, guest greater, tied)` as exact fractions.
    pub fn fractions(&self) -> Option<(Rational, Rational, Rational)> {
        let n = self.counted() as i128;
        (n > 0).then(|| {
            (
                Rational::new(self.host_greater as i128, n),
                Rational::new(self.guest_greater as i128, n),
                Rational::new(self.tied as i128, n),
            )
        })
    }
}

pub fn reciprocity(community: &str, dyads: &[CollaborationDyad], baselines: &Baselines) -> ReciprocityStats {
    let mut stats = ReciprocityStats { community: community.to_string(), ..Default::default() };
    for dyad in dyads {
        let n = dyad.videos.len();
        match (baselines.get(&dyad.host), baselines.get(&dyad.guest)) {
            (Ok(h), Ok(g)) => match h.cmp(&g) {
                core::cmp::Ordering::Greater => stats.host_greater += n,
                core::cmp::Ordering::Less => stats.guest_greater += n,
                core::cmp::Ordering::Equal => stats.tied += n,
            },
            _ => stats.excluded_videos += n,
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn dyad(host: &str, guest: &str, videos: &[&str], t: &str) -> CollaborationDyad {
        CollaborationDyad {
            host: host.into(),
            guest: guest.into(),
            videos: videos.iter().map(|v| v.to_string()).collect(),
            dyad_type: t.into(),
        }
    }

    fn baselines(pairs: &[(&str, Rational)]) -> Baselines {
        Baselines::from_values(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    #[test]
    fn two_video_example() {
        let d = dyad("A", "B", &["v1", "v2"], "M-M");
        let views: BTreeMap<&str, u64> = [("v1", 100), ("v2", 200)].into_iter().collect();
        let s = dyad_synergy(&d, &views, &baselines(&[("A", r(300)), ("B", r(100))])).unwrap();
        assert_eq!(s.shap2_host, r(50));
        assert_eq!(s.shapn_host, Rational::new(-1, 2));
        assert_eq!(s.shap2_guest, r(-150));
        assert_eq!(s.shapn_guest, Rational::new(-3, 2));
        assert_eq!(s.lift_host, Rational::new(1, 2));
        assert_eq!(s.mean_collab_views, r(150));
    }

    #[test]
    fn views_at_guest_baseline() {
        let d = dyad("A", "B", &["v1"], "M-W");
        let views: BTreeMap<&str, u64> = [("v1", 40)].into_iter().collect();
        let s = dyad_synergy(&d, &views, &baselines(&[("A", r(7)), ("B", r(40))])).unwrap();
        assert_eq!(s.shap2_host, r(0));
        assert_eq!(s.shapn_host, r(-1));
    }

    #[test]
    fn zero_baseline_is_guarded_and_keeps_raw() {
        let d = dyad("A", "B", &["v1"], "M-W");
        let views: BTreeMap<&str, u64> = [("v1", 40)].into_iter().collect();
        let err = dyad_synergy(&d, &views, &baselines(&[("A", r(7)), ("B", r(0))])).unwrap_err();
        match err {
            SynergyError::ZeroBaseline { channel_id, raw } => {
                assert_eq!(channel_id, "B");
                assert_eq!(raw.shap2_host, r(40));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compute_sorts_dyads_into_buckets() {
        let dyads = vec![
            dyad("A", "B", &["v1"], "M-W"),
            dyad("A", "Z", &["v2"], "M-W"),
            dyad("B", "C", &["v3"], "W-M"),
        ];
        let mk = |id: &str, ch: &str, views| VideoRecord {
            video_id: id.into(),
            channel_id: ch.into(),
            published_at: Default::default(),
            title: String::new(),
            description: String::new(),
            view_count: views,
            like_count: None,
            comment_count: None,
        };
        let videos = vec![mk("v1", "A", 10), mk("v2", "A", 10), mk("v3", "B", 10)];
        let b = baselines(&[("A", r(5)), ("B", r(5)), ("C", r(0))]);
        let run = compute_synergies(&dyads, &videos, &b);
        assert_eq!(run.synergies.len(), 1);
        assert_eq!(run.raw_only.len(), 1);
        assert_eq!(run.skipped.len(), 1);
        assert_eq!(run.skipped[0].guest, "Z");
    }

    fn synthetic(t: &str, shapn_host: Rational) -> DyadSynergy {
        DyadSynergy {
            dyad: dyad("a", "b", &["v"], t),
            n_videos: 1,
            mean_collab_views: r(0),
            baseline_host: r(1),
            baseline_guest: r(1),
            shap2_host: r(0),
            shap2_guest: r(0),
            shapn_host,
            shapn_guest: r(0),
            lift_host: r(0),
            lift_guest: r(0),
        }
    }

    #[test]
    fn aggregation_examples() {
        assert!(aggregate_by_dyad_type("c", &[], Aggregation::Median).rows.is_empty());
        let three = [
            synthetic("M-M", Rational::new(-1, 2)),
            synthetic("M-M", r(0)),
            synthetic("M-M", Rational::new(5, 2)),
        ];
        let rep = aggregate_by_dyad_type("c", &three, Aggregation::Median);
        assert_eq!(rep.get("M-M").unwrap().shapn_host, r(0));
        assert_eq!(rep.get("M-M").unwrap().dyads, 3);
        assert!(rep.get("W-W").is_none());
        let mean = aggregate_by_dyad_type("c", &three, Aggregation::Mean);
        assert_eq!(mean.get("M-M").unwrap().shapn_host, Rational::new(2, 3));
    }

    #[test]
    fn reciprocity_examples() {
        let dyads = vec![
            dyad("A", "B", &["v1"], "x"),
            dyad("C", "D", &["v2"], "x"),
            dyad("E", "F", &["v3", "v4"], "x"),
            dyad("A", "Q", &["v5"], "x"),
        ];
        let b = baselines(&[("A", r(5)), ("B", r(1)), ("C", r(3)), ("D", r(3)), ("E", r(1)), ("F", r(9))]);
        let stats = reciprocity("c", &dyads, &b);
        let (h, g, t) = stats.fractions().unwrap();
        assert_eq!((h, g, t), (Rational::new(1, 4), Rational::new(1, 2), Rational::new(1, 4)));
        assert_eq!(stats.excluded_videos, 1);
        assert_eq!(h + g + t, r(1));

        let upstream = vec![dyad("E", "F", &["v3"], "x")];
        let (h, g, _) = reciprocity("c", &upstream, &b).fractions().unwrap();
        assert_eq!((h, g), (r(0), r(1)));
    }

    proptest! {
        #[test]
        fn scale_swap_and_identity(
            collab in proptest::collection::vec(0u64..1_000_000, 1..8),
            host_base in 1u64..1_000_000,
            guest_base in 1u64..1_000_000,
            c in 1i128..100,
        ) {
            let ids: Vec<alloc::string::String> = (0..collab.len()).map(|i| alloc::format!("v{i}")).collect();
            let id_refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
            let d = dyad("A", "B", &id_refs, "M-W");
            let views: BTreeMap<&str, u64> = id_refs.iter().copied().zip(collab.iter().copied()).collect();
            let b = baselines(&[("A", r(host_base as i128)), ("B", r(guest_base as i128))]);
            let s = dyad_synergy(&d, &views, &b).unwrap();

            let scaled_views: BTreeMap<&str, u64> = views.iter().map(|(k, v)| (*k, v * c as u64)).collect();
            let sb = baselines(&[("A", r(host_base as i128 * c)), ("B", r(guest_base as i128 * c))]);
            let t = dyad_synergy(&d, &scaled_views, &sb).unwrap();
            prop_assert_eq!(t.shap2_host, s.shap2_host * r(c));
            prop_assert_eq!(t.shap2_guest, s.shap2_guest * r(c));
            prop_assert_eq!(t.shapn_host, s.shapn_host);
            prop_assert_eq!(t.shapn_guest, s.shapn_guest);

            let swapped = dyad("B", "A", &id_refs, "W-M");
            let w = dyad_synergy(&swapped, &views, &b).unwrap();
            prop_assert_eq!((w.shap2_host, w.shap2_guest), (s.shap2_guest, s.shap2_host));
            prop_assert_eq!((w.shapn_host, w.shapn_guest), (s.shapn_guest, s.shapn_host));

            let rep = aggregate_by_dyad_type("c", core::slice::from_ref(&s), Aggregation::Median);
            let row = rep.get("M-W").unwrap();
            prop_assert_eq!(row.shapn_host, s.shapn_host);
            prop_assert_eq!(row.shapn_guest, s.shapn_guest);
            prop_assert_eq!(row.videos, s.n_videos);
        }
    }
}
