use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CommunitySpec, DiscourseProfile, PlantedDyad, PlantedTruth, SimError};
use crate::collab::dyad_label;
use crate::corpus::{self, ChannelRecord, CommentRecord, Corpus, VideoRecord};
use crate::discourse::lexicon::TOPIC_KEYWORDS;
use crate::discourse::Topic;

// One ChaCha stream per entity class.
const STREAM_CHANNELS: u64 = 1;
const STREAM_VIDEOS: u64 = 2;
const STREAM_COLLABS: u64 = 3;
const STREAM_VIEWS: u64 = 4;
const STREAM_AUDIENCE: u64 = 5;
const STREAM_COMMENTS: u64 = 6;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

fn lognormal(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    libm::exp(sigma * standard_normal(rng))
}

/// Index into `cumulative` (a running sum of weights) for a uniform draw.
fn pick_weighted(rng: &mut ChaCha8Rng, cumulative: &[f64]) -> usize {
    let total = *cumulative.last().unwrap();
    let x = rng.gen::<f64>() * total;
    cumulative.partition_point(|&c| c <= x).min(cumulative.len() - 1)
}

/// Integer shares of `total` proportional to `weights`, largest remainder
/// first, ties broken by position.
fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if total == 0 || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| libm::floor(*e) as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - counts[a] as f64;
        let rb = exact[b] - counts[b] as f64;
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let assigned: usize = counts.iter().sum();
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

const SYLLABLES: &[&str] = &[
    "ka", "zu", "mi", "ro", "vex", "lyn", "dra", "nox", "pi", "tor", "sa", "qi", "fen", "bel", "ari", "mo", "xel",
    "ju", "ny", "ost",
];
const SUFFIXES: &[&str] = &["plays", "gg", "tv", "live", "", "yt"];

fn slug(name: &str) -> String {
    name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

struct Channel {
    id: String,
    handle: String,
    label: String,
    scale: f64,
    videos: usize,
}

fn make_channels(spec: &CommunitySpec) -> Vec<Channel> {
    let mut rng = stream(spec.seed, STREAM_CHANNELS);
    let keys: Vec<&String> = spec.attribute_ratios.keys().collect();
    let weights: Vec<f64> = spec.attribute_ratios.values().copied().collect();
    let counts = apportion(spec.n_channels, &weights);
    let mut labels: Vec<String> = Vec::with_capacity(spec.n_channels);
    for (k, &n) in keys.iter().zip(&counts) {
        labels.extend(core::iter::repeat_n((*k).clone(), n));
    }
    labels.shuffle(&mut rng);
    let mut ranks: Vec<usize> = (1..=spec.n_channels).collect();
    ranks.shuffle(&mut rng);

    let base = spec.total_videos / spec.n_channels.max(1);
    let extra = spec.total_videos % spec.n_channels.max(1);
    let prefix = slug(&spec.community);
    labels
        .into_iter()
        .enumerate()
        .map(|(i, label)| {
            let a = SYLLABLES[rng.gen_range(0..SYLLABLES.len())];
            let b = SYLLABLES[rng.gen_range(0..SYLLABLES.len())];
            let suffix = SUFFIXES[rng.gen_range(0..SUFFIXES.len())];
            Channel {
                id: format!("{prefix}-ch{i:03}"),
                handle: format!("{a}{b}{suffix}{i}"),
                label,
                scale: spec.top_channel_views * libm::pow(ranks[i] as f64, -spec.power_law_exponent),
                videos: base + usize::from(i < extra),
            }
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Solo,
    TwoWay(usize),
    MultiWay(usize),
}

struct Plan {
    dyads: Vec<(usize, usize, String, f64)>,
    dyad_videos: Vec<usize>,
    multi: Vec<(usize, Vec<usize>)>,
}

fn plan_collaborations(spec: &CommunitySpec, channels: &[Channel]) -> Result<Plan, SimError> {
    let mut rng = stream(spec.seed, STREAM_COLLABS);
    let n = channels.len();
    let n_two_way = libm::round(spec.two_way_share * spec.total_videos as f64) as usize;
    let n_two_way = if spec.n_dyads == 0 { 0 } else { n_two_way };
    let n_multi = if n_two_way == 0 {
        0
    } else {
        libm::round(n_two_way as f64 * (1.0 - spec.two_way_fraction) / spec.two_way_fraction) as usize
    };
    let pairs = n * n.saturating_sub(1) / 2;
    if n_two_way > 0 && spec.n_dyads > pairs {
        return Err(SimError::Infeasible(format!(
            "{} dyads requested but only {pairs} channel pairs exist",
            spec.n_dyads
        )));
    }
    if n_two_way > 0 && n_two_way < spec.n_dyads {
        return Err(SimError::Infeasible(format!(
            "{n_two_way} two-way videos cannot cover {} dyads",
            spec.n_dyads
        )));
    }
    if n_multi > 0 && n < 3 {
        return Err(SimError::Infeasible("multi-way collaborations need at least 3 channels".into()));
    }

    let mut plan = Plan { dyads: Vec::new(), dyad_videos: Vec::new(), multi: Vec::new() };
    if n_two_way == 0 {
        return Ok(plan);
    }

    let types: Vec<(&String, f64)> =
        spec.dyad_propensity.iter().filter(|(_, &p)| p > 0.0).map(|(t, &p)| (t, p)).collect();
    let per_type = apportion(spec.n_dyads, &types.iter().map(|(_, p)| *p).collect::<Vec<_>>());
    let mut used_pairs = BTreeSet::new();
    for ((dyad_type, _), count) in types.iter().zip(per_type) {
        for _ in 0..count {
            let candidates: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| {
                    a != b
                        && !used_pairs.contains(&(a.min(b), a.max(b)))
                        && dyad_label(&channels[a].label, &channels[b].label) == **dyad_type
                })
                .collect();
            if candidates.is_empty() {
                return Err(SimError::Infeasible(format!("not enough channel pairs for {count} {dyad_type} dyads")));
            }
            let upstream = rng.gen::<f64>() < spec.upstream_bias;
            let preferred: Vec<(usize, usize)> = candidates
                .iter()
                .copied()
                .filter(|&(a, b)| (channels[a].scale < channels[b].scale) == upstream)
                .collect();
            let pool = if preferred.is_empty() { &candidates } else { &preferred };
            let (a, b) = pool[rng.gen_range(0..pool.len())];
            used_pairs.insert((a.min(b), a.max(b)));
            let multiplier = spec.synergy_multipliers[*dyad_type] * lognormal(&mut rng, spec.dyad_noise);
            plan.dyads.push((a, b, (*dyad_type).clone(), multiplier));
        }
    }

    // every channel keeps at least one solo video for its baseline
    let mut free: Vec<usize> = channels.iter().map(|c| c.videos.saturating_sub(1)).collect();
    plan.dyad_videos = vec![0; plan.dyads.len()];
    for (i, &(host, ..)) in plan.dyads.iter().enumerate() {
        if free[host] == 0 {
            return Err(SimError::Infeasible(format!("channel {} has no video to host a collaboration", channels[host].id)));
        }
        free[host] -= 1;
        plan.dyad_videos[i] = 1;
    }
    for _ in plan.dyads.len()..n_two_way {
        let open: Vec<usize> = (0..plan.dyads.len()).filter(|&i| free[plan.dyads[i].0] > 0).collect();
        if open.is_empty() {
            return Err(SimError::Infeasible("hosts ran out of videos for two-way collaborations".into()));
        }
        let i = open[rng.gen_range(0..open.len())];
        free[plan.dyads[i].0] -= 1;
        plan.dyad_videos[i] += 1;
    }
    for _ in 0..n_multi {
        let owners: Vec<usize> = (0..n).filter(|&c| free[c] > 0).collect();
        if owners.is_empty() {
            return Err(SimError::Infeasible("no videos left for multi-way collaborations".into()));
        }
        let owner = owners[rng.gen_range(0..owners.len())];
        free[owner] -= 1;
        let k = if rng.gen::<f64>() < 0.7 { 2 } else { 3 }.min(n - 1);
        let mut others: Vec<usize> = (0..n).filter(|&c| c != owner).collect();
        others.shuffle(&mut rng);
        others.truncate(k);
        others.sort_unstable();
        plan.multi.push((owner, others));
    }
    Ok(plan)
}

const SOLO_DESCRIPTIONS: &[&str] = &[
    "New video every day! Gear and codes: @merchstore",
    "Ranked grind continues. Thanks for watching!",
    "Subscribe to @{own} for more. Business: mail@example.com",
    "Chill session today, music by @lofibeats_official",
    "Patch notes breakdown and tips.",
    "",
];
const TWO_WAY_DESCRIPTIONS: &[&str] = &[
    "Duo with @{g}! Go check them out.",
    "Played with {g} today, what a session",
    "ft. @{g} | sponsored by @energydrinkco",
    "Me and @{g} try something new. Subscribe to @{own}!",
];

fn guest_handle_form(rng: &mut ChaCha8Rng, handle: &str) -> String {
    match rng.gen_range(0..3) {
        0 => handle.to_string(),
        1 => capitalize(handle),
        _ => handle.to_uppercase(),
    }
}

fn keywords(topic: Topic) -> Vec<&'static str> {
    TOPIC_KEYWORDS.iter().filter(|(c, _)| *c == topic.name()).map(|(_, t)| *t).collect()
}

const TOPIC_FRAMES: &[&str] = &["that {kw} moment", "the {kw} part", "about the {kw}", "{kw} again"];
const OTHER_PHRASES: &[&str] = &["first time here", "hello from chile", "who else is watching at night", "early"];
const POSITIVE: &[&str] = &["love this", "so good", "this is amazing", "great video", "wholesome", "gg"];
const NEGATIVE: &[&str] = &["this is boring", "kinda trash", "not good", "worst one yet", "so annoying"];
const NEUTRAL: &[&str] = &["", "watching now", "ok"];

fn comment_text(rng: &mut ChaCha8Rng, profile: &DiscourseProfile, topic_keywords: &[Vec<&'static str>]) -> String {
    let cumulative: Vec<f64> = Topic::ALL
        .iter()
        .scan(0.0, |acc, t| {
            *acc += profile.topic_weights.get(t).copied().unwrap_or(0.0);
            Some(*acc)
        })
        .collect();
    let topic = Topic::ALL[pick_weighted(rng, &cumulative)];
    let frame = TOPIC_FRAMES[rng.gen_range(0..TOPIC_FRAMES.len())];
    let other = OTHER_PHRASES[rng.gen_range(0..OTHER_PHRASES.len())];
    let topic_phrase = match topic {
        Topic::Other => other.to_string(),
        t => {
            let kws = &topic_keywords[t as usize];
            frame.replace("{kw}", kws[rng.gen_range(0..kws.len())])
        }
    };
    let u = rng.gen::<f64>();
    let pool = if u < profile.positive {
        POSITIVE
    } else if u < profile.positive + profile.negative {
        NEGATIVE
    } else {
        NEUTRAL
    };
    let mood = pool[rng.gen_range(0..pool.len())];
    match (mood.is_empty(), rng.gen::<bool>()) {
        (true, _) => topic_phrase,
        (false, true) => format!("{mood}, {topic_phrase}"),
        (false, false) => format!("{topic_phrase}! {mood}"),
    }
}

fn epoch() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 6, 1, 0, 0, 0).unwrap()
}

/// Builds a synthetic community. Deterministic for a fixed spec.
pub fn generate(spec: &CommunitySpec) -> Result<(Corpus, PlantedTruth), SimError> {
    spec.validate()?;
    let channels = make_channels(spec);
    let plan = plan_collaborations(spec, &channels)?;

    // place collaboration roles on random video slots of their owners
    let mut roles: Vec<Vec<Role>> = channels.iter().map(|c| vec![Role::Solo; c.videos]).collect();
    {
        let mut rng = stream(spec.seed, STREAM_VIDEOS);
        let mut wanted: Vec<Vec<Role>> = vec![Vec::new(); channels.len()];
        for (i, (host, ..)) in plan.dyads.iter().enumerate() {
            wanted[*host].extend(core::iter::repeat_n(Role::TwoWay(i), plan.dyad_videos[i]));
        }
        for (i, (owner, _)) in plan.multi.iter().enumerate() {
            wanted[*owner].push(Role::MultiWay(i));
        }
        for (c, list) in wanted.into_iter().enumerate() {
            let mut slots: Vec<usize> = (0..channels[c].videos).collect();
            slots.shuffle(&mut rng);
            for (slot, role) in slots.into_iter().zip(list) {
                roles[c][slot] = role;
            }
        }
    }

    let mut desc_rng = stream(spec.seed, STREAM_VIDEOS ^ 0x100);
    let mut view_rng = stream(spec.seed, STREAM_VIEWS);
    let mut videos = Vec::with_capacity(spec.total_videos);
    let mut dyad_video_ids: Vec<Vec<(DateTime<Utc>, String)>> = vec![Vec::new(); plan.dyads.len()];
    let mut multi_way_videos = BTreeSet::new();
    for (c, ch) in channels.iter().enumerate() {
        for (j, role) in roles[c].iter().enumerate() {
            let noise = lognormal(&mut view_rng, spec.view_noise);
            let offset = desc_rng.gen_range(0..86_400);
            let published_at = epoch() - Duration::days(j as i64) + Duration::seconds(offset);
            let video_id = format!("{}-v{j:04}", ch.id);
            let (views, description) = match *role {
                Role::Solo => {
                    let t = SOLO_DESCRIPTIONS[desc_rng.gen_range(0..SOLO_DESCRIPTIONS.len())];
                    (ch.scale * noise, t.replace("{own}", &ch.handle))
                }
                Role::TwoWay(d) => {
                    let (h, g, _, m) = &plan.dyads[d];
                    dyad_video_ids[d].push((published_at, video_id.clone()));
                    let t = TWO_WAY_DESCRIPTIONS[desc_rng.gen_range(0..TWO_WAY_DESCRIPTIONS.len())];
                    let guest = guest_handle_form(&mut desc_rng, &channels[*g].handle);
                    let views = m * libm::sqrt(channels[*h].scale * channels[*g].scale) * noise;
                    (views, t.replace("{g}", &guest).replace("{own}", &ch.handle))
                }
                Role::MultiWay(k) => {
                    multi_way_videos.insert(video_id.clone());
                    let names: Vec<String> =
                        plan.multi[k].1.iter().map(|&g| format!("@{}", channels[g].handle)).collect();
                    (ch.scale * noise * 1.2, format!("Squad stream with {}", names.join(", ")))
                }
            };
            let views = libm::round(views).max(0.0) as u64;
            videos.push(VideoRecord {
                video_id,
                channel_id: ch.id.clone(),
                published_at,
                title: format!("{} session #{}", capitalize(&spec.community), ch.videos - j),
                description,
                view_count: views,
                like_count: Some(views / 25),
                comment_count: Some(0),
            });
        }
    }

    let comments = generate_comments(spec, &channels, &roles, &plan, &mut videos);

    let registry: Vec<ChannelRecord> = channels
        .iter()
        .map(|c| ChannelRecord {
            channel_id: c.id.clone(),
            handles: vec![format!("@{}", c.handle)],
            display_name: capitalize(&c.handle),
            attributes: [(spec.attribute_key.clone(), c.label.clone())].into_iter().collect(),
            community: spec.community.clone(),
        })
        .collect();
    let registry = corpus::validate_registry(registry, &spec.attribute_key)
        .map_err(|e| SimError::Infeasible(format!("generated registry is invalid: {e}")))?;
    corpus::sort_videos(&mut videos);
    let corpus = Corpus::new(spec.community.clone(), registry, videos, comments)
        .map_err(|e| SimError::Infeasible(format!("generated corpus is inconsistent: {e}")))?;

    let mut dyads: Vec<PlantedDyad> = plan
        .dyads
        .iter()
        .zip(dyad_video_ids)
        .map(|((h, g, t, m), mut vids)| {
            vids.sort();
            PlantedDyad {
                host: channels[*h].id.clone(),
                guest: channels[*g].id.clone(),
                dyad_type: t.clone(),
                multiplier: *m,
                videos: vids.into_iter().map(|(_, id)| id).collect(),
            }
        })
        .collect();
    dyads.sort_by(|a, b| (&a.host, &a.guest).cmp(&(&b.host, &b.guest)));

    let present: BTreeSet<&str> = dyads.iter().map(|d| d.dyad_type.as_str()).collect();
    let mut ranking: Vec<String> = present.iter().map(|s| s.to_string()).collect();
    ranking.sort_by(|a, b| spec.synergy_multipliers[b].total_cmp(&spec.synergy_multipliers[a]).then(a.cmp(b)));

    let truth = PlantedTruth {
        community: spec.community.clone(),
        seed: spec.seed,
        attribute_key: spec.attribute_key.clone(),
        attribute_histogram: corpus::attribute_histogram(&corpus.registry, &spec.attribute_key),
        channel_scales: channels.iter().map(|c| (c.id.clone(), c.scale)).collect(),
        type_multipliers: spec.synergy_multipliers.clone(),
        ranking,
        two_way_videos: dyads.iter().map(|d| d.videos.len()).sum(),
        dyads,
        multi_way_videos,
        total_videos: corpus.videos.len(),
        loyalty: spec.loyalty,
    };
    Ok((corpus, truth))
}

fn generate_comments(
    spec: &CommunitySpec,
    channels: &[Channel],
    roles: &[Vec<Role>],
    plan: &Plan,
    videos: &mut [VideoRecord],
) -> Vec<CommentRecord> {
    if spec.audience_size == 0 || channels.is_empty() {
        return Vec::new();
    }
    let mut audience_rng = stream(spec.seed, STREAM_AUDIENCE);
    let mut rng = stream(spec.seed, STREAM_COMMENTS);
    let popularity: Vec<f64> = channels
        .iter()
        .scan(0.0, |acc, c| {
            *acc += c.scale;
            Some(*acc)
        })
        .collect();
    // videos were pushed channel by channel in role order
    let mut first_video = Vec::with_capacity(channels.len());
    let mut at = 0;
    for c in channels {
        first_video.push(at);
        at += c.videos;
    }
    let topic_keywords: Vec<Vec<&'static str>> = Topic::ALL.iter().map(|&t| keywords(t)).collect();
    let fallback = DiscourseProfile::new([0.2; 5], 0.4, 0.2);
    let baseline_profile = spec.discourse_profiles.get("baseline").unwrap_or(&fallback);
    let prefix = slug(&spec.community);
    let p_stop = 1.0 / spec.mean_comments_per_commenter;

    let mut comments = Vec::new();
    for u in 0..spec.audience_size {
        let home = pick_weighted(&mut audience_rng, &popularity);
        let mut k = 1;
        while k < 500 && audience_rng.gen::<f64>() >= p_stop {
            k += 1;
        }
        let author_id = format!("{prefix}-u{u:05}");
        for _ in 0..k {
            // fixed number of draws per comment keeps the stream aligned across loyalty values
            let loyal = rng.gen::<f64>() < spec.loyalty;
            let wander = rng.gen_range(0..channels.len());
            let c = if loyal { home } else { wander };
            let slot = rng.gen_range(0..channels[c].videos.max(1));
            let delay = rng.gen_range(60..30 * 86_400);
            if channels[c].videos == 0 {
                continue;
            }
            let profile = match roles[c][slot] {
                Role::TwoWay(d) => spec.discourse_profiles.get(&plan.dyads[d].2).unwrap_or(baseline_profile),
                _ => baseline_profile,
            };
            let text = comment_text(&mut rng, profile, &topic_keywords);
            let video = &mut videos[first_video[c] + slot];
            video.comment_count = Some(video.comment_count.unwrap_or(0) + 1);
            comments.push(CommentRecord {
                comment_id: format!("{prefix}-k{:07}", comments.len()),
                video_id: video.video_id.clone(),
                author_id: author_id.clone(),
                text,
                published_at: video.published_at + Duration::seconds(delay),
                like_count: Some(rng.gen_range(0..20)),
            });
        }
    }
    comments
}
