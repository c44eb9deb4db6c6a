//! CSV and JSON-lines readers and writers for registries, videos and
//! comments. The format is picked from the file extension (`.jsonl` or
//! `.ndjson` for JSON-lines, anything else is CSV with a header row).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use collabkit_core::corpus::{
    self, Admitted, ChannelRecord, CommentRecord, RegistryError, RowError, RowErrorKind, VideoRecord,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("jsonl" | "ndjson") => Format::JsonLines,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Header { path: String, message: String },
    #[error("{path}, line {line}: {message}")]
    Row { path: String, line: u64, message: String },
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

fn open(path: &Path) -> Result<BufReader<File>, LoadError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

/// Decoded rows tagged with 1-based source lines, plus rows that failed to
/// decode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Decoded<T> {
    pub rows: Vec<(u64, T)>,
    pub errors: Vec<RowError>,
}

fn malformed(line: u64, message: impl ToString) -> RowError {
    RowError { line, kind: RowErrorKind::Malformed { message: message.to_string() } }
}

fn decode_jsonl<R: BufRead, W: for<'de> Deserialize<'de>>(reader: R) -> Result<Decoded<W>, std::io::Error> {
    let mut out = Decoded { rows: Vec::new(), errors: Vec::new() };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let n = i as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(row) => out.rows.push((n, row)),
            Err(e) => out.errors.push(malformed(n, e)),
        }
    }
    Ok(out)
}

fn decode_csv<R: Read, W: for<'de> Deserialize<'de>>(
    reader: R,
    path: &Path,
    required: &[&str],
) -> Result<Decoded<W>, LoadError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| LoadError::Header { path: path.display().to_string(), message: e.to_string() })?
        .clone();
    if let Some(missing) = required.iter().find(|c| !headers.iter().any(|h| h == **c)) {
        return Err(LoadError::Header {
            path: path.display().to_string(),
            message: format!("missing column {missing:?}"),
        });
    }
    let mut out = Decoded { rows: Vec::new(), errors: Vec::new() };
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line();
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line());
                match record.deserialize(Some(&headers)) {
                    Ok(row) => out.rows.push((line, row)),
                    Err(e) => out.errors.push(malformed(line, e)),
                }
            }
            Err(e) => match e.kind() {
                csv::ErrorKind::Io(_) => {
                    return Err(LoadError::Row { path: path.display().to_string(), line, message: e.to_string() })
                }
                _ => out.errors.push(malformed(e.position().map_or(line, |p| p.line()), e)),
            },
        }
    }
    Ok(out)
}

fn decode<W: for<'de> Deserialize<'de>>(path: &Path, required: &[&str]) -> Result<Decoded<W>, LoadError> {
    let reader = open(path)?;
    match Format::from_path(path) {
        Format::Csv => decode_csv(reader, path, required),
        Format::JsonLines => {
            decode_jsonl(reader).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
        }
    }
}

// ---- registry ----

const REGISTRY_COLUMNS: [&str; 4] = ["channel_id", "handles", "display_name", "community"];

fn read_registry_csv<R: Read>(reader: R, path: &Path) -> Result<Vec<ChannelRecord>, LoadError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| LoadError::Header { path: path.display().to_string(), message: e.to_string() })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let mut idx = [0; 4];
    for (slot, name) in idx.iter_mut().zip(REGISTRY_COLUMNS) {
        *slot = col(name).ok_or_else(|| LoadError::Header {
            path: path.display().to_string(),
            message: format!("missing column {name:?}"),
        })?;
    }
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| LoadError::Row {
            path: path.display().to_string(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let attributes: BTreeMap<String, String> = headers
            .iter()
            .enumerate()
            .filter(|(i, _)| !idx.contains(i))
            .filter(|(i, _)| !row[*i].is_empty())
            .map(|(i, h)| (h.to_string(), row[i].to_string()))
            .collect();
        records.push(ChannelRecord {
            channel_id: row[idx[0]].to_string(),
            handles: row[idx[1]].split(';').map(str::trim).filter(|h| !h.is_empty()).map(String::from).collect(),
            display_name: row[idx[2]].to_string(),
            attributes,
            community: row[idx[3]].to_string(),
        });
    }
    Ok(records)
}

/// Reads and validates a channel registry. Registry problems are fatal:
/// every later stage depends on it.
pub fn load_registry(path: &Path, attribute_key: &str) -> Result<Vec<ChannelRecord>, LoadError> {
    let records = match Format::from_path(path) {
        Format::Csv => read_registry_csv(open(path)?, path)?,
        Format::JsonLines => {
            let decoded: Decoded<ChannelRecord> =
                decode_jsonl(open(path)?).map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
            if let Some(e) = decoded.errors.first() {
                return Err(LoadError::Row { path: path.display().to_string(), line: e.line, message: e.kind.to_string() });
            }
            decoded.rows.into_iter().map(|(_, r)| r).collect()
        }
    };
    Ok(corpus::validate_registry(records, attribute_key)?)
}

// ---- videos ----

/// Wire form of a video row: view counts are signed so negative values can
/// be reported instead of failing to parse.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct VideoRow {
    video_id: String,
    channel_id: String,
    published_at: DateTime<Utc>,
    #[serde(default)]
    title: String,
    #[serde(default)]
    description: String,
    view_count: i64,
    #[serde(default)]
    like_count: Option<u64>,
    #[serde(default)]
    comment_count: Option<u64>,
}

const VIDEO_COLUMNS: [&str; 4] = ["video_id", "channel_id", "published_at", "view_count"];

/// Decodes video rows without checking them against a registry.
pub fn read_video_rows(path: &Path) -> Result<Decoded<VideoRecord>, LoadError> {
    let raw: Decoded<VideoRow> = decode(path, &VIDEO_COLUMNS)?;
    let mut out = Decoded { rows: Vec::with_capacity(raw.rows.len()), errors: raw.errors };
    for (line, r) in raw.rows {
        if r.view_count < 0 {
            out.errors.push(RowError { line, kind: RowErrorKind::NegativeViewCount { value: r.view_count } });
            continue;
        }
        out.rows.push((
            line,
            VideoRecord {
                video_id: r.video_id,
                channel_id: r.channel_id,
                published_at: r.published_at,
                title: r.title,
                description: r.description,
                view_count: r.view_count as u64,
                like_count: r.like_count,
                comment_count: r.comment_count,
            },
        ));
    }
    Ok(out)
}

/// Loads videos, rejecting bad rows individually. Errors come back sorted
/// by line.
pub fn load_videos(path: &Path, registry: &[ChannelRecord]) -> Result<Admitted<VideoRecord>, LoadError> {
    let decoded = read_video_rows(path)?;
    let mut admitted = corpus::admit_videos(decoded.rows, registry);
    admitted.errors.extend(decoded.errors);
    admitted.errors.sort_by_key(|e| e.line);
    Ok(admitted)
}

// ---- comments ----

const COMMENT_COLUMNS: [&str; 5] = ["comment_id", "video_id", "author_id", "text", "published_at"];

pub fn read_comment_rows(path: &Path) -> Result<Decoded<CommentRecord>, LoadError> {
    decode(path, &COMMENT_COLUMNS)
}

pub fn load_comments(path: &Path, videos: &[VideoRecord]) -> Result<Admitted<CommentRecord>, LoadError> {
    let decoded = read_comment_rows(path)?;
    let mut admitted = corpus::admit_comments(decoded.rows, videos);
    admitted.errors.extend(decoded.errors);
    admitted.errors.sort_by_key(|e| e.line);
    Ok(admitted)
}

// ---- writers ----

fn create(path: &Path) -> std::io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut w = create(path)?;
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true)
}

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_registry(path: &Path, registry: &[ChannelRecord]) -> anyhow::Result<()> {
    if Format::from_path(path) == Format::JsonLines {
        return write_jsonl(path, registry);
    }
    let keys: std::collections::BTreeSet<&str> =
        registry.iter().flat_map(|c| c.attributes.keys().map(String::as_str)).collect();
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header: Vec<&str> = REGISTRY_COLUMNS.to_vec();
    header.extend(keys.iter().copied());
    w.write_record(&header)?;
    for c in registry {
        let mut row = vec![c.channel_id.clone(), c.handles.join(";"), c.display_name.clone(), c.community.clone()];
        row.extend(keys.iter().map(|k| c.attributes.get(*k).cloned().unwrap_or_default()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_videos(path: &Path, videos: &[VideoRecord]) -> anyhow::Result<()> {
    if Format::from_path(path) == Format::JsonLines {
        return write_jsonl(path, videos);
    }
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record([
        "video_id",
        "channel_id",
        "published_at",
        "title",
        "description",
        "view_count",
        "like_count",
        "comment_count",
    ])?;
    for v in videos {
        w.write_record([
            v.video_id.clone(),
            v.channel_id.clone(),
            timestamp(&v.published_at),
            v.title.clone(),
            v.description.clone(),
            v.view_count.to_string(),
            opt(v.like_count),
            opt(v.comment_count),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comments(path: &Path, comments: &[CommentRecord]) -> anyhow::Result<()> {
    if Format::from_path(path) == Format::JsonLines {
        return write_jsonl(path, comments);
    }
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["comment_id", "video_id", "author_id", "text", "published_at", "like_count"])?;
    for c in comments {
        w.write_record([
            c.comment_id.clone(),
            c.video_id.clone(),
            c.author_id.clone(),
            c.text.clone(),
            timestamp(&c.published_at),
            opt(c.like_count),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("a/b.jsonl")), Format::JsonLines);
        assert_eq!(Format::from_path(Path::new("a/b.NDJSON")), Format::JsonLines);
        assert_eq!(Format::from_path(Path::new("a/b.csv")), Format::Csv);
    }

    #[test]
    fn registry_csv_with_extra_attributes() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "r.csv",
            "channel_id,handles,display_name,community,gender,region\nA,@Alpha; alpha2,Alpha,val,M,eu\nB,beta,Beta,val,W,\n",
        );
        let reg = load_registry(&p, "gender").unwrap();
        assert_eq!(reg[0].handles, ["alpha", "alpha2"]);
        assert_eq!(reg[0].attribute("region"), Some("eu"));
        assert_eq!(reg[1].attribute("region"), None);
    }

    #[test]
    fn header_only_registry_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "r.csv", "channel_id,handles,display_name,community,gender\n");
        assert!(load_registry(&p, "gender").unwrap().is_empty());
    }

    #[test]
    fn colliding_handles_name_both_channels() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "r.csv",
            "channel_id,handles,display_name,community,gender\nA,@GuestChan,A,c,M\nB,guestchan,B,c,W\n",
        );
        let msg = load_registry(&p, "gender").unwrap_err().to_string();
        assert!(msg.contains("A, B"), "{msg}");
    }

    #[test]
    fn negative_and_malformed_video_rows() {
        let dir = tempfile::tempdir().unwrap();
        let reg = vec![ChannelRecord {
            channel_id: "A".into(),
            handles: vec!["a".into()],
            display_name: "A".into(),
            attributes: [("gender".to_string(), "M".to_string())].into(),
            community: "c".into(),
        }];
        let p = write(
            dir.path(),
            "v.csv",
            "video_id,channel_id,published_at,title,description,view_count,like_count,comment_count\n\
             v1,A,2024-01-02T00:00:00Z,t,d,-1,,\n\
             v2,A,not-a-date,t,d,5,,\n\
             v3,A,2024-01-01T00:00:00Z,t,d,5,,\n\
             v4,Z,2024-01-01T00:00:00Z,t,d,5,,\n",
        );
        let got = load_videos(&p, &reg).unwrap();
        assert_eq!(got.records.len(), 1);
        let lines: Vec<u64> = got.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, [2, 3, 5]);
        assert!(matches!(got.errors[0].kind, RowErrorKind::NegativeViewCount { value: -1 }));
    }

    #[test]
    fn jsonl_comments_with_orphan() {
        let dir = tempfile::tempdir().unwrap();
        let v = VideoRecord {
            video_id: "v1".into(),
            channel_id: "A".into(),
            published_at: "2024-01-01T00:00:00Z".parse().unwrap(),
            title: String::new(),
            description: String::new(),
            view_count: 1,
            like_count: None,
            comment_count: None,
        };
        let mut body = String::new();
        for (i, vid) in ["v1", "v1", "v1", "v1", "gone"].iter().enumerate() {
            body.push_str(&format!(
                "{{\"comment_id\":\"c{i}\",\"video_id\":\"{vid}\",\"author_id\":\"u\",\"text\":\"\",\"published_at\":\"2024-01-01T00:00:00Z\"}}\n"
            ));
        }
        body.push_str("{broken\n");
        let p = write(dir.path(), "c.jsonl", &body);
        let got = load_comments(&p, &[v]).unwrap();
        assert_eq!(got.records.len(), 4);
        assert_eq!(got.orphans.len(), 1);
        assert_eq!(got.errors.len(), 1);
        assert_eq!(got.errors[0].line, 6);
    }
}
