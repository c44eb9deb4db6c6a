//! Acceptance criteria. Runs as a plain binary and prints one line per
//! criterion; any failure makes the process exit non-zero.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use collabkit::config::RunConfig;
use collabkit::pipeline::Stage;
use collabkit::{run, sim};
use collabkit_core::collab::detect_collaborations;
use collabkit_core::corpus::{ChannelRecord, CommentRecord, Corpus, VideoRecord};
use collabkit_core::discourse::{aggregate_discourse, score_all, tag_all, KeywordClassifier, LexiconScorer, Topic};
use collabkit_core::netmetrics::{
    closeness, commenter_entropy, shannon_entropy, uniform_grid, AttentionGraph, CollabGraph,
};
use collabkit_core::simgen::{
    compare_outputs, generate, CommunitySpec, PipelineOutputs, PlantedTruth, Preset, SimError,
};
use collabkit_core::synergy::{aggregate_by_dyad_type, Aggregation};
use collabkit_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Small generated community with at most 20 videos.
fn tiny_spec(i: u64) -> CommunitySpec {
    CommunitySpec {
        community: format!("fixture-{i}"),
        n_channels: 4 + (i % 4) as usize,
        total_videos: 12 + (i % 9) as usize,
        two_way_share: 0.3,
        two_way_fraction: 0.75,
        n_dyads: 2 + (i % 3) as usize,
        audience_size: 8,
        mean_comments_per_commenter: 2.0,
        ..CommunitySpec::preset(Preset::Valorant, i)
    }
}

/// The first `count` feasible tiny fixtures from seed `from` on, with the
/// number of infeasible draws skipped.
fn tiny_fixtures(from: u64, count: usize) -> Result<(Vec<(Corpus, PlantedTruth)>, usize), String> {
    let mut out = Vec::new();
    let mut rejected = 0;
    let mut seed = from;
    while out.len() < count {
        match generate(&tiny_spec(seed)) {
            Ok(f) => out.push(f),
            Err(SimError::Infeasible(_)) if rejected < 10 * count => rejected += 1,
            Err(e) => return Err(format!("fixture seed {seed}: {e}")),
        }
        seed += 1;
    }
    Ok((out, rejected))
}

fn shapley_oracle() -> Outcome {
    let start = Instant::now();
    let mut synergy_checks = 0;
    let (fixtures, rejected) = tiny_fixtures(0, 50)?;
    for (i, (corpus, truth)) in fixtures.iter().enumerate() {
        ensure!(corpus.videos.len() <= 20, "fixture {i} has {} videos", corpus.videos.len());
        let outputs = PipelineOutputs::compute(corpus, "gender").map_err(|e| e.to_string())?;
        let report = compare_outputs(corpus, truth, &outputs);
        ensure!(report.is_ok(), "fixture {i}: {:?}", report.mismatches.first());
        synergy_checks += outputs.synergy.synergies.len();
    }
    let elapsed = start.elapsed();
    ensure!(synergy_checks > 0, "no dyad produced a synergy value");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("50 fixtures ({rejected} infeasible draws skipped), {synergy_checks} dyads matched exactly in {elapsed:.2?}"))
}

fn scale_equivariance() -> Outcome {
    let seven = Rational::from_integer(7);
    let mut compared = 0;
    let (fixtures, _) = tiny_fixtures(1000, 20)?;
    for (i, (corpus, _)) in fixtures.into_iter().enumerate() {
        let mut scaled = corpus.clone();
        for v in &mut scaled.videos {
            v.view_count *= 7;
        }
        let a = PipelineOutputs::compute(&corpus, "gender").map_err(|e| e.to_string())?;
        let b = PipelineOutputs::compute(&scaled, "gender").map_err(|e| e.to_string())?;
        ensure!(a.synergy.synergies.len() == b.synergy.synergies.len(), "fixture {i}: dyad count changed");
        for (x, y) in a.synergy.synergies.iter().zip(&b.synergy.synergies) {
            ensure!(x.shapn_host == y.shapn_host && x.shapn_guest == y.shapn_guest, "fixture {i}: shapn changed");
            ensure!(
                x.shap2_host * seven == y.shap2_host && x.shap2_guest * seven == y.shap2_guest,
                "fixture {i}: shap2 not scaled by 7"
            );
            compared += 1;
        }
    }
    ensure!(compared > 0, "no dyads compared");
    Ok(format!("20 fixtures, {compared} dyads"))
}

fn entropy_identities() -> Outcome {
    ensure!(shannon_entropy(&[5]) == 0.0, "single channel");
    for k in [2usize, 4, 8, 16] {
        let h = shannon_entropy(&vec![3; k]);
        ensure!((h - (k as f64).log2()).abs() <= 1e-12, "uniform over {k}: {h}");
    }
    let h = shannon_entropy(&[2, 1, 1]);
    ensure!((h - 1.5).abs() <= 1e-12, "(2,1,1): {h}");

    // the same identities through the commenter attention graph
    let videos: Vec<VideoRecord> = (0..16).map(|c| video(&format!("v{c}"), &format!("ch{c}"), "", 1)).collect();
    let mut comments = Vec::new();
    let mut add = |author: &str, channel: usize, n: usize| {
        for _ in 0..n {
            let id = format!("k{}", comments.len());
            comments.push(comment(&id, &format!("v{channel}"), author, ""));
        }
    };
    add("loyal", 0, 4);
    for c in 0..8 {
        add("spread", c, 2);
    }
    add("mixed", 0, 2);
    add("mixed", 1, 1);
    add("mixed", 2, 1);
    let dist = commenter_entropy(&AttentionGraph::build(&comments, &videos), 0);
    let get = |a: &str| dist.per_commenter[a].entropy;
    ensure!(get("loyal") == 0.0, "loyal commenter H = {}", get("loyal"));
    ensure!((get("spread") - 3.0).abs() <= 1e-12, "spread commenter H = {}", get("spread"));
    ensure!((get("mixed") - 1.5).abs() <= 1e-12, "mixed commenter H = {}", get("mixed"));
    Ok("H=0, log2 k for k in {2,4,8,16}, 1.5 bits".into())
}

fn graph(n: usize, edges: &[(usize, usize)]) -> CollabGraph {
    let mut g = CollabGraph::with_nodes((0..n).map(|i| format!("n{i:02}")));
    for &(a, b) in edges {
        g.add_edge(&format!("n{a:02}"), &format!("n{b:02}"), 1);
    }
    g
}

/// Component-scaled closeness from an all-pairs Floyd-Warshall matrix.
fn all_pairs_closeness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    const INF: u64 = u64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        if a != b {
            d[a][b] = 1;
            d[b][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let reach: Vec<u64> = d[i].iter().copied().filter(|&x| x < INF && x > 0).collect();
            if reach.is_empty() {
                0.0
            } else {
                let r = reach.len() as f64;
                (r / (n - 1) as f64) * (r / reach.iter().sum::<u64>() as f64)
            }
        })
        .collect()
}

fn closeness_cases() -> Outcome {
    let p3 = closeness(&graph(3, &[(0, 1), (1, 2)]));
    let want = [2.0 / 3.0, 1.0, 2.0 / 3.0];
    for (got, want) in p3.values().zip(want) {
        ensure!((got - want).abs() <= 1e-12, "P3: {p3:?}");
    }
    let k4 = closeness(&graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]));
    ensure!(k4.values().all(|&c| (c - 1.0).abs() <= 1e-12), "K4: {k4:?}");
    let iso = closeness(&graph(4, &[(0, 1)]));
    ensure!(iso["n02"] == 0.0 && iso["n03"] == 0.0, "isolated: {iso:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..200 {
        let n = rng.gen_range(1..=12);
        let p: f64 = rng.gen_range(0.05..0.6);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
        let got = closeness(&graph(n, &edges));
        for (got, want) in got.values().zip(all_pairs_closeness(n, &edges)) {
            ensure!((got - want).abs() <= 1e-9, "random graph {trial}: {got} vs {want}");
        }
    }
    Ok("P3, K4, isolated nodes and 200 random graphs".into())
}

fn planted_ranking() -> Outcome {
    let start = Instant::now();
    let mut recovered = 0;
    let mut misses = Vec::new();
    for seed in 0..100 {
        let mut spec = CommunitySpec::preset(Preset::Valorant, seed);
        spec.audience_size = 0;
        let (corpus, truth) = generate(&spec).map_err(|e| e.to_string())?;
        let outputs = PipelineOutputs::compute(&corpus, "gender").map_err(|e| e.to_string())?;
        let report = aggregate_by_dyad_type(&corpus.community, &outputs.synergy.synergies, Aggregation::Median);
        if report.host_ranking() == truth.ranking {
            recovered += 1;
        } else {
            misses.push(seed);
        }
    }
    let elapsed = start.elapsed();
    ensure!(recovered >= 95, "recovered {recovered}/100; missed seeds {misses:?}");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{recovered}/100 seeds in {elapsed:.2?}"))
}

fn simulate_presets(root: &Path, seed: u64) -> Result<Vec<std::path::PathBuf>, String> {
    Preset::ALL
        .iter()
        .map(|&p| {
            let dir = root.join(p.name());
            sim::simulate_to(&dir, &CommunitySpec::preset(p, seed)).map_err(|e| format!("{e:#}"))?;
            Ok(dir)
        })
        .collect()
}

fn table_structure() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpora = simulate_presets(tmp.path(), 11)?;
    let cfg = RunConfig { corpora, out: tmp.path().join("out"), ..Default::default() };
    let outcome = run(&cfg, &[Stage::Synergy], "acceptance").map_err(|e| format!("{e:#}"))?;
    ensure!(outcome.success(), "run failed: {:?}", outcome.manifest.failed_stage);
    for side in ["a", "b"] {
        let csv = std::fs::read_to_string(cfg.out.join(format!("synergy_table_{side}.csv"))).map_err(|e| e.to_string())?;
        let lines: Vec<&str> = csv.lines().collect();
        ensure!(lines.first() == Some(&"community,W-W,W-M,M-W,M-M"), "{side}: header {:?}", lines.first());
        ensure!(lines.len() == 4, "{side}: {} rows", lines.len() - 1);
        let dbd = lines.iter().find(|l| l.starts_with("dead-by-daylight,")).ok_or("no dead-by-daylight row")?;
        ensure!(dbd.split(',').nth(1) == Some("—"), "{side}: W-W cell of {dbd}");
        for line in &lines[1..] {
            ensure!(line.split(',').count() == 5, "{side}: ragged row {line}");
        }
        let text = std::fs::read_to_string(cfg.out.join(format!("synergy_table_{side}.txt"))).map_err(|e| e.to_string())?;
        let header = text.lines().nth(1).unwrap_or_default();
        let cols: Vec<&str> = header.split_whitespace().collect();
        ensure!(cols == ["Game", "W-W", "W-M", "M-W", "M-M"], "{side}: text header {header:?}");
        let dbd_text = text.lines().find(|l| l.starts_with("dead-by-daylight")).ok_or("no text row")?;
        ensure!(dbd_text.split_whitespace().nth(1) == Some("—"), "{side}: text row {dbd_text}");
        for community in ["valorant", "animal-crossing"] {
            ensure!(text.lines().any(|l| l.starts_with(community)), "{side}: no {community} row");
        }
    }
    Ok("3 communities x W-W/W-M/M-W/M-M, dead-by-daylight W-W rendered as —".into())
}

fn share_exactness() -> Outcome {
    let mut details = Vec::new();
    // the preset plants the reported share; the integer split closest to it
    // is what the generator writes and what must come back
    let (corpus, truth) = generate(&CommunitySpec::preset(Preset::Valorant, 7)).map_err(|e| e.to_string())?;
    let measured = detect_collaborations(&corpus, "gender").map_err(|e| e.to_string())?;
    let got = measured.stats.two_way_fraction_of_collaborations();
    ensure!(got == truth.two_way_fraction(), "preset: planted {:?}, measured {got:?}", truth.two_way_fraction());
    let f = got.ok_or("no collaborations")?;
    ensure!(
        (collabkit_core::rational::to_f64(&f) - 0.696).abs() < 0.0005,
        "preset fraction {f} does not round to 69.6%"
    );
    details.push(format!("valorant preset {f}"));

    // generation scale with counts that make 69.6% exact: 609 two-way and
    // 266 multi-way videos out of 13,471
    let spec = CommunitySpec { two_way_share: 609.0 / 13_471.0, ..CommunitySpec::preset(Preset::Valorant, 7) };
    let (corpus, truth) = generate(&spec).map_err(|e| e.to_string())?;
    let measured = detect_collaborations(&corpus, "gender").map_err(|e| e.to_string())?;
    let exact = Some(Rational::new(696, 1000));
    ensure!(truth.two_way_fraction() == exact, "planted {:?}", truth.two_way_fraction());
    ensure!(
        measured.stats.two_way_fraction_of_collaborations() == exact,
        "measured {:?}",
        measured.stats.two_way_fraction_of_collaborations()
    );
    ensure!(measured.stats.total_videos == 13_471, "total {}", measured.stats.total_videos);
    details.push(format!("exact spec {}/{}", measured.stats.two_way_videos, measured.stats.two_way_videos + measured.multi_way_videos.len()));
    Ok(details.join("; "))
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bundles = Vec::new();
    for _ in 0..2 {
        let corpora = simulate_presets(tmp.path(), 5)?;
        let cfg = RunConfig { corpora, out: tmp.path().join("out"), seed: 5, ..Default::default() };
        let outcome = run(&cfg, &Stage::ALL, "collabkit report").map_err(|e| format!("{e:#}"))?;
        ensure!(outcome.success(), "run failed: {:?}", outcome.manifest.failed_stage);
        bundles.push(read_tree(tmp.path()));
        for entry in std::fs::read_dir(tmp.path()).unwrap() {
            std::fs::remove_dir_all(entry.unwrap().path()).unwrap();
        }
    }
    ensure!(bundles[0].keys().eq(bundles[1].keys()), "file sets differ");
    for (name, bytes) in &bundles[0] {
        ensure!(&bundles[1][name] == bytes, "{name} differs between runs");
    }
    Ok(format!("{} files byte-identical", bundles[0].len()))
}

fn loyalty_dominance() -> Outcome {
    for seed in 0..20 {
        let mut dists = Vec::new();
        for loyalty in [0.9, 0.3] {
            let spec = CommunitySpec { loyalty, ..CommunitySpec::preset(Preset::Valorant, seed) };
            let (corpus, _) = generate(&spec).map_err(|e| e.to_string())?;
            dists.push(commenter_entropy(&AttentionGraph::build(&corpus.comments, &corpus.videos), 0));
        }
        let max = dists.iter().filter_map(|d| d.max()).fold(0.0, f64::max);
        for g in uniform_grid(max, 0.1) {
            let (hi, lo) = (dists[0].cdf_at(g), dists[1].cdf_at(g));
            ensure!(hi >= lo, "seed {seed}: F_0.9({g:.1}) = {hi} < F_0.3 = {lo}");
        }
    }
    Ok("loyalty 0.9 CDF at or above loyalty 0.3 at every grid point, 20 seeds".into())
}

fn channel(id: &str, handle: &str, gender: &str) -> ChannelRecord {
    ChannelRecord {
        channel_id: id.into(),
        handles: vec![handle.into()],
        display_name: id.into(),
        attributes: [("gender".to_string(), gender.to_string())].into_iter().collect(),
        community: "fixture".into(),
    }
}

fn video(id: &str, owner: &str, description: &str, views: u64) -> VideoRecord {
    VideoRecord {
        video_id: id.into(),
        channel_id: owner.into(),
        published_at: Default::default(),
        title: String::new(),
        description: description.into(),
        view_count: views,
        like_count: None,
        comment_count: None,
    }
}

fn comment(id: &str, video: &str, author: &str, text: &str) -> CommentRecord {
    CommentRecord {
        comment_id: id.into(),
        video_id: video.into(),
        author_id: author.into(),
        text: text.into(),
        published_at: Default::default(),
        like_count: None,
    }
}

fn discourse_fixture() -> Outcome {
    let registry = vec![channel("A", "alpha", "M"), channel("B", "bravo", "M"), channel("C", "charlie", "W")];
    let videos = vec![
        video("v1", "A", "duo run with @bravo", 10),
        video("v2", "C", "ft. @alpha", 10),
        video("v3", "A", "solo", 10),
        video("v4", "B", "solo", 10),
    ];
    // valences 7, 1, -1, -7 normalize to 7/8, 1/4, -1/4, -7/8
    let texts = [
        ("v1", "zap that aim"),
        ("v1", "yay"),
        ("v1", "zap zap"),
        ("v1", "boo the map"),
        ("v2", "zap outfit"),
        ("v2", "boo"),
        ("v3", "yay"),
        ("v3", "ugh pizza"),
        ("v4", "hello"),
        ("v4", "yay island"),
    ];
    let comments =
        texts.iter().enumerate().map(|(i, (v, t))| comment(&format!("k{i}"), v, &format!("u{i}"), t)).collect();
    let corpus = Corpus::new("fixture", registry, videos, comments).map_err(|e| e.to_string())?;
    let scorer = LexiconScorer::from_entries(
        [("zap", 7.0), ("yay", 1.0), ("boo", -1.0), ("ugh", -7.0)].map(|(t, v)| (t.to_string(), v)),
    );
    // "zap zap" sums to 14 and is the one value that needs the formula
    let zap_zap = 14.0 / (14.0f64 * 14.0 + 15.0).sqrt();
    let detection = detect_collaborations(&corpus, "gender").map_err(|e| e.to_string())?;
    let report =
        aggregate_discourse(&corpus, &detection, &tag_all(&corpus, &KeywordClassifier::bundled()), &score_all(&corpus, &scorer));

    let expected = [
        ("M-M", 4, (0.875 + 0.25 + zap_zap - 0.25) / 4.0),
        ("W-M", 2, (0.875 - 0.25) / 2.0),
    ];
    for (t, n, mean) in expected {
        let g = report.by_dyad_type.get(t).ok_or(format!("no {t} group"))?;
        ensure!(g.comments == n, "{t}: {} comments", g.comments);
        ensure!(g.mean_sentiment == mean, "{t}: mean {} != {mean}", g.mean_sentiment);
    }
    let base = report.baseline.as_ref().ok_or("no baseline group")?;
    ensure!(base.comments == 4, "baseline: {} comments", base.comments);
    ensure!(base.mean_sentiment == (0.25 - 0.875 + 0.0 + 0.25) / 4.0, "baseline mean {}", base.mean_sentiment);

    let mut groups: Vec<_> = report.by_dyad_type.values().collect();
    groups.push(base);
    let (sim_corpus, _) = generate(&CommunitySpec::preset(Preset::AnimalCrossing, 2)).map_err(|e| e.to_string())?;
    let sim_detection = detect_collaborations(&sim_corpus, "gender").map_err(|e| e.to_string())?;
    let sim_report = aggregate_discourse(
        &sim_corpus,
        &sim_detection,
        &tag_all(&sim_corpus, &KeywordClassifier::bundled()),
        &score_all(&sim_corpus, &LexiconScorer::bundled()),
    );
    groups.extend(sim_report.by_dyad_type.values());
    groups.extend(sim_report.baseline.as_ref());
    for g in &groups {
        let topics: BTreeSet<Topic> = g.topic_proportions.keys().copied().collect();
        ensure!(topics.len() == Topic::ALL.len(), "missing topics");
        let sum: f64 = g.topic_proportions.values().sum();
        ensure!((sum - 1.0).abs() <= 1e-12, "topic proportions sum to {sum}");
    }
    Ok(format!("hand-computed means matched; {} groups sum to 1", groups.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Shapley oracle equivalence", shapley_oracle),
        ("scale equivariance", scale_equivariance),
        ("entropy identities", entropy_identities),
        ("closeness correctness", closeness_cases),
        ("planted ranking recovery", planted_ranking),
        ("synergy table structure", table_structure),
        ("two-way share exactness", share_exactness),
        ("deterministic bundles", determinism),
        ("loyalty entropy dominance", loyalty_dominance),
        ("discourse report integrity", discourse_fixture),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
