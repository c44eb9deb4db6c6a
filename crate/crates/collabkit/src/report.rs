//! Rendering of analysis results into CSV, JSON and plain-text tables.
//!
//! Every renderer returns bytes; the caller decides where they go. Text
//! tables round to three decimals, machine formats keep full precision and
//! JSON carries exact rationals as `[numerator, denominator]`.

use std::collections::BTreeMap;

use collabkit_core::collab::CollabDetection;
use collabkit_core::discourse::{GroupStats, Topic};
use collabkit_core::rational::to_f64;
use collabkit_core::synergy::{Aggregation, SynergyReport};
use collabkit_core::Rational;
use serde::Serialize;
use serde_json::json;

use crate::pipeline::{Analysis, LoadedCorpus};

/// Placeholder for a dyad type a community has no data for.
pub const ABSENT: &str = "—";

pub type Files = BTreeMap<String, Vec<u8>>;

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable report");
    out.push(b'\n');
    out
}

fn jsonl_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut out = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut out, &row).expect("serializable row");
        out.push(b'\n');
    }
    out
}

fn num(x: f64) -> String {
    x.to_string()
}

fn rat(r: &Rational) -> String {
    to_f64(r).to_string()
}

fn fixed(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" { "0.000".into() } else { s }
}

/// Left-aligned first column, right-aligned numbers, two-space gutters.
pub fn render_table(title: &str, header: &[String], rows: &[Vec<String>], notes: &[String]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (i, cell) in row.iter().enumerate().take(cols) {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let line = |row: &[String]| {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let pad = width[i] - c.chars().count();
                if i == 0 {
                    format!("{c}{}", " ".repeat(pad))
                } else {
                    format!("{}{c}", " ".repeat(pad))
                }
            })
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = format!("{title}\n");
    out.push_str(&line(header));
    out.push('\n');
    out.push_str(&"-".repeat(width.iter().sum::<usize>() + 2 * cols.saturating_sub(1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    for note in notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

// ---- ingest ----

pub fn ingest_summary(loaded: &[&LoadedCorpus]) -> (Vec<u8>, Vec<u8>) {
    let header = [
        "community",
        "channels",
        "videos",
        "comments",
        "rejected_video_rows",
        "rejected_comment_rows",
        "orphan_comments",
        "capped_videos",
        "capped_comments",
    ];
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    for l in loaded {
        let c = &l.corpus;
        let rejected = |i: usize| l.issues.get(i).map_or(0, |f| f.errors.len());
        let orphans: usize = l.issues.iter().map(|f| f.orphans.len()).sum();
        rows.push(vec![
            c.community.clone(),
            c.registry.len().to_string(),
            c.videos.len().to_string(),
            c.comments.len().to_string(),
            rejected(0).to_string(),
            rejected(1).to_string(),
            orphans.to_string(),
            l.capped_videos.to_string(),
            l.capped_comments.to_string(),
        ]);
        for f in &l.issues {
            for e in &f.errors {
                issues.push(json!({"community": c.community, "file": f.file, "line": e.line, "error": e.kind}));
            }
            for o in &f.orphans {
                issues.push(json!({"community": c.community, "file": f.file, "line": o.line,
                    "error": {"kind": "orphan", "comment_id": o.comment.comment_id, "video_id": o.comment.video_id}}));
            }
        }
    }
    (csv_bytes(&header, rows), jsonl_bytes(issues))
}

// ---- collaborations ----

pub fn dyads_jsonl(analyses: &[Analysis]) -> Vec<u8> {
    jsonl_bytes(analyses.iter().filter_map(|a| a.detection.as_ref().map(|d| (a, d))).flat_map(|(a, d)| {
        d.dyads.iter().map(move |dy| {
            json!({"community": a.community, "host": dy.host, "guest": dy.guest,
                   "dyad_type": dy.dyad_type, "n_videos": dy.videos.len(), "videos": dy.videos})
        })
    }))
}

pub fn collab_stats_jsonl(analyses: &[Analysis]) -> Vec<u8> {
    jsonl_bytes(analyses.iter().filter_map(|a| {
        a.detection.as_ref().map(|d| {
            let fraction = d.stats.two_way_fraction_of_collaborations();
            json!({"community": a.community, "total_videos": d.stats.total_videos,
                   "two_way_videos": d.stats.two_way_videos, "multi_way_videos": d.stats.multi_way_videos,
                   "two_way_share": d.stats.two_way_share(),
                   "two_way_fraction_of_collaborations": fraction.map(|f| to_f64(&f)),
                   "two_way_fraction_exact": fraction,
                   "videos_by_dyad_type": d.stats.videos_by_dyad_type})
        })
    }))
}

fn share_rows(detection: &CollabDetection, columns: &[String]) -> Vec<(String, usize, f64)> {
    let s = &detection.stats;
    let share = |n: usize| if s.total_videos == 0 { 0.0 } else { n as f64 / s.total_videos as f64 };
    let mut rows: Vec<(String, usize, f64)> = columns
        .iter()
        .map(|t| {
            let n = s.videos_by_dyad_type.get(t).copied().unwrap_or(0);
            (t.clone(), n, share(n))
        })
        .collect();
    for (t, &n) in &s.videos_by_dyad_type {
        if !columns.contains(t) {
            rows.push((t.clone(), n, share(n)));
        }
    }
    rows.push(("two-way".into(), s.two_way_videos, share(s.two_way_videos)));
    rows.push(("multi-way".into(), s.multi_way_videos, share(s.multi_way_videos)));
    let solo = s.total_videos - s.two_way_videos - s.multi_way_videos;
    rows.push(("non-collaboration".into(), solo, share(solo)));
    rows
}

/// Collaboration-share decomposition: one row per community and category.
pub fn collab_share_csv(analyses: &[Analysis], columns: &[String]) -> Vec<u8> {
    let mut rows = Vec::new();
    for a in analyses {
        if let Some(d) = &a.detection {
            for (cat, n, share) in share_rows(d, columns) {
                rows.push(vec![a.community.clone(), cat, n.to_string(), num(share)]);
            }
        }
    }
    csv_bytes(&["community", "category", "videos", "share_of_videos"], rows)
}

pub fn collab_share_table(analyses: &[Analysis], columns: &[String]) -> String {
    let mut header = vec!["community".to_string()];
    header.extend(columns.iter().cloned());
    header.extend(strings(&["two-way", "multi-way", "two-way/collabs"]));
    let mut rows = Vec::new();
    for a in analyses {
        let Some(d) = &a.detection else { continue };
        let by_cat: BTreeMap<String, f64> = share_rows(d, columns).into_iter().map(|(c, _, s)| (c, s)).collect();
        let mut row = vec![a.community.clone()];
        for c in columns.iter().map(String::as_str).chain(["two-way", "multi-way"]) {
            row.push(format!("{:.3}%", by_cat.get(c).copied().unwrap_or(0.0) * 100.0));
        }
        row.push(match d.stats.two_way_fraction_of_collaborations() {
            Some(f) => format!("{:.3}%", to_f64(&f) * 100.0),
            None => ABSENT.to_string(),
        });
        rows.push(row);
    }
    render_table("Collaboration share of all videos", &header, &rows, &[])
}

// ---- synergy ----

pub fn synergy_dyads_csv(analyses: &[Analysis]) -> Vec<u8> {
    let header = [
        "community",
        "host",
        "guest",
        "dyad_type",
        "n_videos",
        "mean_collab_views",
        "baseline_host",
        "baseline_guest",
        "shap2_host",
        "shap2_guest",
        "shapn_host",
        "shapn_guest",
        "lift_host",
        "lift_guest",
        "status",
    ];
    let mut rows = Vec::new();
    for a in analyses {
        let Some(s) = &a.synergy else { continue };
        for d in &s.run.synergies {
            rows.push(vec![
                a.community.clone(),
                d.dyad.host.clone(),
                d.dyad.guest.clone(),
                d.dyad.dyad_type.clone(),
                d.n_videos.to_string(),
                rat(&d.mean_collab_views),
                rat(&d.baseline_host),
                rat(&d.baseline_guest),
                rat(&d.shap2_host),
                rat(&d.shap2_guest),
                rat(&d.shapn_host),
                rat(&d.shapn_guest),
                rat(&d.lift_host),
                rat(&d.lift_guest),
                "ok".into(),
            ]);
        }
        for r in &s.run.raw_only {
            let mut row = vec![
                a.community.clone(),
                r.dyad.host.clone(),
                r.dyad.guest.clone(),
                r.dyad.dyad_type.clone(),
                r.n_videos.to_string(),
                rat(&r.mean_collab_views),
                rat(&r.baseline_host),
                rat(&r.baseline_guest),
                rat(&r.shap2_host),
                rat(&r.shap2_guest),
            ];
            row.extend(std::iter::repeat_n(String::new(), 4));
            row.push("zero-baseline".into());
            rows.push(row);
        }
        for k in &s.run.skipped {
            let mut row = vec![a.community.clone(), k.host.clone(), k.guest.clone()];
            row.extend(std::iter::repeat_n(String::new(), 11));
            row.push(format!("skipped: {}", k.reason));
            rows.push(row);
        }
    }
    csv_bytes(&header, rows)
}

pub fn synergy_dyads_jsonl(analyses: &[Analysis]) -> Vec<u8> {
    jsonl_bytes(analyses.iter().filter_map(|a| a.synergy.as_ref().map(|s| (a, s))).flat_map(|(a, s)| {
        s.run.synergies.iter().map(move |d| json!({"community": a.community, "synergy": d}))
    }))
}

/// Which side of the dyad a synergy table reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Host,
    Guest,
}

impl Side {
    fn pick(self, report: &SynergyReport, dyad_type: &str) -> Option<Rational> {
        report.get(dyad_type).map(|r| match self {
            Side::Host => r.shapn_host,
            Side::Guest => r.shapn_guest,
        })
    }

    fn title(self, stat: Aggregation) -> String {
        let who = match self {
            Side::Host => "(a) Channel A (host)",
            Side::Guest => "(b) Channel B (guest)",
        };
        format!("Normalized Shapley values, {who}, {} over dyads", stat.name())
    }
}

fn synergy_reports(analyses: &[Analysis]) -> Vec<&SynergyReport> {
    analyses.iter().filter_map(|a| a.synergy.as_ref().map(|s| &s.report)).collect()
}

fn empty_note(analyses: &[Analysis]) -> Vec<String> {
    let empty: Vec<&str> = analyses
        .iter()
        .filter(|a| a.synergy.as_ref().is_some_and(|s| s.report.rows.is_empty()))
        .map(|a| a.community.as_str())
        .collect();
    if empty.is_empty() {
        Vec::new()
    } else {
        vec![format!("no scored two-way collaborations in: {}", empty.join(", "))]
    }
}

pub fn synergy_table_csv(analyses: &[Analysis], columns: &[String], side: Side) -> Vec<u8> {
    let mut header = vec!["community"];
    header.extend(columns.iter().map(String::as_str));
    let rows = synergy_reports(analyses).into_iter().map(|r| {
        let mut row = vec![r.community.clone()];
        row.extend(columns.iter().map(|t| side.pick(r, t).map_or_else(|| ABSENT.to_string(), |v| rat(&v))));
        row
    });
    csv_bytes(&header, rows)
}

pub fn synergy_table_json(analyses: &[Analysis], columns: &[String], side: Side, stat: Aggregation) -> Vec<u8> {
    let rows: Vec<_> = synergy_reports(analyses)
        .into_iter()
        .map(|r| {
            let values: serde_json::Map<String, serde_json::Value> = columns
                .iter()
                .map(|t| (t.clone(), side.pick(r, t).map_or(serde_json::Value::Null, |v| json!(to_f64(&v)))))
                .collect();
            let exact: serde_json::Map<String, serde_json::Value> =
                columns.iter().map(|t| (t.clone(), json!(side.pick(r, t)))).collect();
            let dyads: serde_json::Map<String, serde_json::Value> =
                columns.iter().map(|t| (t.clone(), json!(r.get(t).map_or(0, |x| x.dyads)))).collect();
            json!({"community": r.community, "values": values, "exact": exact, "dyads": dyads})
        })
        .collect();
    json_bytes(&json!({
        "side": match side { Side::Host => "host", Side::Guest => "guest" },
        "aggregation": stat.name(),
        "columns": columns,
        "rows": rows,
        "notes": empty_note(analyses),
    }))
}

pub fn synergy_table_text(analyses: &[Analysis], columns: &[String], side: Side, stat: Aggregation) -> String {
    let mut header = vec!["Game".to_string()];
    header.extend(columns.iter().cloned());
    let rows: Vec<Vec<String>> = synergy_reports(analyses)
        .into_iter()
        .map(|r| {
            let mut row = vec![r.community.clone()];
            row.extend(columns.iter().map(|t| side.pick(r, t).map_or_else(|| ABSENT.to_string(), |v| fixed(to_f64(&v)))));
            row
        })
        .collect();
    let mut notes = empty_note(analyses);
    notes.push("reciprocal uploads (A hosts B, B hosts A) are kept as distinct dyads".into());
    render_table(&side.title(stat), &header, &rows, &notes)
}

/// Community, host greater, guest greater, tied, excluded videos and the
/// three shares.
type ReciprocityRow = (String, usize, usize, usize, usize, Option<(f64, f64, f64)>);

fn reciprocity_rows(analyses: &[Analysis]) -> Vec<ReciprocityRow> {
    analyses
        .iter()
        .filter_map(|a| a.synergy.as_ref())
        .map(|s| {
            let r = &s.reciprocity;
            let f = r.fractions().map(|(h, g, t)| (to_f64(&h), to_f64(&g), to_f64(&t)));
            (r.community.clone(), r.host_greater, r.guest_greater, r.tied, r.excluded_videos, f)
        })
        .collect()
}

pub fn reciprocity_csv(analyses: &[Analysis]) -> Vec<u8> {
    let header = [
        "community",
        "host_greater",
        "guest_greater",
        "tied",
        "excluded_videos",
        "host_greater_share",
        "guest_greater_share",
        "tied_share",
    ];
    let rows = reciprocity_rows(analyses).into_iter().map(|(c, h, g, t, x, f)| {
        let (fh, fg, ft) = f.map_or((String::new(), String::new(), String::new()), |(a, b, c)| (num(a), num(b), num(c)));
        vec![c, h.to_string(), g.to_string(), t.to_string(), x.to_string(), fh, fg, ft]
    });
    csv_bytes(&header, rows)
}

pub fn reciprocity_table(analyses: &[Analysis]) -> String {
    let header = strings(&["community", "A greater", "B greater", "tied", "videos"]);
    let rows: Vec<Vec<String>> = reciprocity_rows(analyses)
        .into_iter()
        .map(|(c, h, g, t, _, f)| match f {
            Some((a, b, d)) => vec![
                c,
                format!("{:.3}%", a * 100.0),
                format!("{:.3}%", b * 100.0),
                format!("{:.3}%", d * 100.0),
                (h + g + t).to_string(),
            ],
            None => vec![c, ABSENT.into(), ABSENT.into(), ABSENT.into(), "0".into()],
        })
        .collect();
    render_table("Videos where the channel has greater median viewership", &header, &rows, &[])
}

// ---- network ----

pub fn centrality_csv(analyses: &[Analysis], corpora: &[&LoadedCorpus], attribute_key: &str) -> Vec<u8> {
    let mut rows = Vec::new();
    for a in analyses {
        let Some(c) = &a.centrality else { continue };
        let Some(l) = corpora.iter().find(|l| l.corpus.community == a.community) else { continue };
        for ch in &l.corpus.registry {
            if let Some(v) = c.per_channel.get(&ch.channel_id) {
                rows.push(vec![
                    a.community.clone(),
                    ch.channel_id.clone(),
                    ch.attribute(attribute_key).unwrap_or("unknown").to_string(),
                    num(*v),
                ]);
            }
        }
    }
    csv_bytes(&["community", "channel_id", "attribute", "closeness"], rows)
}

fn centrality_rows(analyses: &[Analysis]) -> Vec<(String, String, Vec<f64>, usize)> {
    let mut out = Vec::new();
    for a in analyses {
        let Some(c) = &a.centrality else { continue };
        for (attr, d) in &c.per_attribute {
            let stats =
                vec![d.quantile(0.0), d.quantile(0.25), d.median, d.quantile(0.75), d.quantile(1.0), d.mean()];
            out.push((a.community.clone(), attr.clone(), stats, d.values.len()));
        }
    }
    out
}

pub fn centrality_summary_csv(analyses: &[Analysis]) -> Vec<u8> {
    let header = ["community", "attribute", "channels", "min", "q1", "median", "q3", "max", "mean"];
    let rows = centrality_rows(analyses).into_iter().map(|(c, attr, stats, n)| {
        let mut row = vec![c, attr, n.to_string()];
        row.extend(stats.into_iter().map(num));
        row
    });
    csv_bytes(&header, rows)
}

pub fn centrality_summary_json(analyses: &[Analysis]) -> Vec<u8> {
    let rows: Vec<_> = centrality_rows(analyses)
        .into_iter()
        .map(|(c, attr, s, n)| {
            json!({"community": c, "attribute": attr, "channels": n, "min": s[0], "q1": s[1],
                   "median": s[2], "q3": s[3], "max": s[4], "mean": s[5]})
        })
        .collect();
    json_bytes(&rows)
}

pub fn centrality_summary_table(analyses: &[Analysis]) -> String {
    let header = strings(&["community", "attribute", "channels", "min", "q1", "median", "q3", "max", "mean"]);
    let rows: Vec<Vec<String>> = centrality_rows(analyses)
        .into_iter()
        .map(|(c, attr, stats, n)| {
            let mut row = vec![c, attr, n.to_string()];
            row.extend(stats.into_iter().map(fixed));
            row
        })
        .collect();
    render_table("Closeness centrality by attribute", &header, &rows, &[])
}

// ---- entropy ----

pub fn entropy_commenters_csv(analyses: &[Analysis]) -> Vec<u8> {
    let mut rows = Vec::new();
    for a in analyses {
        let Some(e) = &a.entropy else { continue };
        for (author, c) in &e.distribution.per_commenter {
            rows.push(vec![
                a.community.clone(),
                author.clone(),
                c.comments.to_string(),
                c.channels.to_string(),
                num(c.entropy),
            ]);
        }
    }
    csv_bytes(&["community", "author_id", "comments", "channels", "entropy"], rows)
}

pub fn entropy_cdf_csv(analyses: &[Analysis]) -> Vec<u8> {
    let mut rows = Vec::new();
    for a in analyses {
        let Some(e) = &a.entropy else { continue };
        for p in &e.cdf {
            rows.push(vec![a.community.clone(), num(p.threshold), num(p.fraction)]);
        }
    }
    csv_bytes(&["community", "threshold", "fraction"], rows)
}

pub fn entropy_summary_table(analyses: &[Analysis]) -> String {
    let header = strings(&["community", "commenters", "mean H", "median H", "max H", "share H=0"]);
    let rows: Vec<Vec<String>> = analyses
        .iter()
        .filter_map(|a| a.entropy.as_ref().map(|e| (a, e)))
        .map(|(a, e)| {
            let d = &e.distribution;
            if d.is_empty() {
                return vec![a.community.clone(), "0".into(), ABSENT.into(), ABSENT.into(), ABSENT.into(), ABSENT.into()];
            }
            let n = d.sorted.len();
            let median = if n % 2 == 1 { d.sorted[n / 2] } else { (d.sorted[n / 2 - 1] + d.sorted[n / 2]) / 2.0 };
            vec![
                a.community.clone(),
                n.to_string(),
                fixed(d.mean().unwrap_or(0.0)),
                fixed(median),
                fixed(d.max().unwrap_or(0.0)),
                fixed(d.cdf_at(0.0)),
            ]
        })
        .collect();
    render_table("Commenter entropy (bits)", &header, &rows, &[])
}

// ---- discourse ----

fn discourse_rows(analyses: &[Analysis], columns: &[String]) -> Vec<(String, String, Option<GroupStats>)> {
    let mut out = Vec::new();
    for a in analyses {
        let Some(d) = &a.discourse else { continue };
        let mut groups: Vec<&String> = columns.iter().collect();
        groups.extend(d.by_dyad_type.keys().filter(|t| !columns.contains(t)));
        for t in groups {
            out.push((a.community.clone(), t.clone(), d.by_dyad_type.get(t).cloned()));
        }
        out.push((a.community.clone(), "baseline".into(), d.baseline.clone()));
    }
    out
}

pub fn discourse_csv(analyses: &[Analysis], columns: &[String]) -> Vec<u8> {
    let mut header = vec!["community", "group", "comments", "mean_sentiment", "sd_sentiment"];
    header.extend(Topic::ALL.iter().map(|t| t.name()));
    let rows = discourse_rows(analyses, columns).into_iter().map(|(c, g, s)| {
        let mut row = vec![c, g];
        match s {
            Some(s) => {
                row.extend([s.comments.to_string(), num(s.mean_sentiment), num(s.sd_sentiment)]);
                row.extend(Topic::ALL.iter().map(|t| num(s.topic_proportions[t])));
            }
            None => {
                row.push("0".into());
                row.extend(std::iter::repeat_n(ABSENT.to_string(), 7));
            }
        }
        row
    });
    csv_bytes(&header, rows)
}

pub fn discourse_json(analyses: &[Analysis]) -> Vec<u8> {
    let reports: Vec<_> = analyses.iter().filter_map(|a| a.discourse.as_ref()).collect();
    json_bytes(&reports)
}

pub fn discourse_table(analyses: &[Analysis], columns: &[String]) -> String {
    let mut header = strings(&["community", "group", "comments", "sentiment", "sd"]);
    header.extend(Topic::ALL.iter().map(|t| t.name().to_string()));
    let rows: Vec<Vec<String>> = discourse_rows(analyses, columns)
        .into_iter()
        .map(|(c, g, s)| {
            let mut row = vec![c, g];
            match s {
                Some(s) => {
                    row.extend([s.comments.to_string(), fixed(s.mean_sentiment), fixed(s.sd_sentiment)]);
                    row.extend(Topic::ALL.iter().map(|t| fixed(s.topic_proportions[t])));
                }
                None => {
                    row.push("0".into());
                    row.extend(std::iter::repeat_n(ABSENT.to_string(), 7));
                }
            }
            row
        })
        .collect();
    let notes: Vec<String> = analyses
        .iter()
        .filter_map(|a| a.discourse.as_ref())
        .filter(|d| d.multi_way_comments > 0 || d.unlabeled_comments > 0)
        .map(|d| {
            format!(
                "{}: {} comments on multi-way videos and {} unlabeled comments left out",
                d.community, d.multi_way_comments, d.unlabeled_comments
            )
        })
        .collect();
    render_table("Comment sentiment and topic shares by dyad type", &header, &rows, &notes)
}
