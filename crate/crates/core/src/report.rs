//! CSV and JSON output formats.
//!
//! CSV dialect: UTF-8, comma separated, header row, LF line endings, ratios
//! with six decimals, empty cells for absent values.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::divergence::{DivergenceRecord, ReleaseSummary};
use crate::error::{Error, Result};
use crate::features::{FeatureTable, FeatureVector, BASE_COLUMNS};
use crate::ownership::{ExpertiseLevel, FileOwnershipProfile};
use crate::stats::RankAssignment;

pub const OWNERSHIP_COLUMNS: &[&str] = &[
    "path",
    "developer_key",
    "commit_count",
    "line_count",
    "own_commit",
    "own_line",
    "level_commit",
    "level_line",
];

pub const DIVERGENCE_COLUMNS: &[&str] = &[
    "path",
    "n_common",
    "n_commit_only",
    "n_line_only",
    "common",
    "commit_only",
    "line_only",
    "rho",
    "expertise_consistency",
];

pub fn fmt_ratio(value: f64) -> String {
    let s = format!("{value:.6}");
    // -0.000000 would not survive a parse/format round trip as written
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn fmt_opt_ratio(value: Option<f64>) -> String {
    value.map(fmt_ratio).unwrap_or_default()
}

fn parse_opt_ratio(field: &str, what: &'static str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|e| Error::parse(what, format!("{field:?}: {e}")))
}

fn parse_count(field: &str, what: &'static str) -> Result<u64> {
    field
        .parse::<u64>()
        .map_err(|e| Error::parse(what, format!("{field:?}: {e}")))
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::parse("csv output", e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::parse("csv output", e.to_string()))
}

fn reader<'a>(text: &'a str, expected: &[&str], what: &'static str) -> Result<csv::Reader<&'a [u8]>> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r.headers()?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(what, format!("unexpected header {headers:?}")));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OwnershipRow {
    pub path: String,
    pub developer_key: String,
    pub commit_count: u64,
    pub line_count: u64,
    pub own_commit: Option<f64>,
    pub own_line: Option<f64>,
    pub level_commit: Option<ExpertiseLevel>,
    pub level_line: Option<ExpertiseLevel>,
}

pub fn ownership_rows(profiles: &[FileOwnershipProfile]) -> Vec<OwnershipRow> {
    profiles
        .iter()
        .flat_map(|p| {
            p.per_developer.iter().map(move |(key, d)| OwnershipRow {
                path: p.path.clone(),
                developer_key: key.clone(),
                commit_count: d.commit_count,
                line_count: d.line_count,
                own_commit: d.own_commit,
                own_line: d.own_line,
                level_commit: d.level_commit,
                level_line: d.level_line,
            })
        })
        .collect()
}

pub fn write_ownership_csv(rows: &[OwnershipRow]) -> Result<String> {
    let mut w = writer();
    w.write_record(OWNERSHIP_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.path.clone(),
            r.developer_key.clone(),
            r.commit_count.to_string(),
            r.line_count.to_string(),
            fmt_opt_ratio(r.own_commit),
            fmt_opt_ratio(r.own_line),
            r.level_commit.map(|l| l.as_str().to_string()).unwrap_or_default(),
            r.level_line.map(|l| l.as_str().to_string()).unwrap_or_default(),
        ])?;
    }
    finish(w)
}

pub fn read_ownership_csv(text: &str) -> Result<Vec<OwnershipRow>> {
    const WHAT: &str = "ownership csv";
    let level = |s: &str| -> Result<Option<ExpertiseLevel>> {
        if s.is_empty() {
            Ok(None)
        } else {
            ExpertiseLevel::parse(s)
                .map(Some)
                .ok_or_else(|| Error::parse(WHAT, format!("bad level {s:?}")))
        }
    };
    let mut r = reader(text, OWNERSHIP_COLUMNS, WHAT)?;
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok(OwnershipRow {
                path: rec[0].to_string(),
                developer_key: rec[1].to_string(),
                commit_count: parse_count(&rec[2], WHAT)?,
                line_count: parse_count(&rec[3], WHAT)?,
                own_commit: parse_opt_ratio(&rec[4], WHAT)?,
                own_line: parse_opt_ratio(&rec[5], WHAT)?,
                level_commit: level(&rec[6])?,
                level_line: level(&rec[7])?,
            })
        })
        .collect()
}

pub fn write_divergence_csv(records: &[DivergenceRecord]) -> Result<String> {
    let mut w = writer();
    w.write_record(DIVERGENCE_COLUMNS)?;
    for r in records {
        w.write_record([
            r.path.clone(),
            r.n_common.to_string(),
            r.n_commit_only.to_string(),
            r.n_line_only.to_string(),
            fmt_ratio(r.common),
            fmt_ratio(r.commit_only),
            fmt_ratio(r.line_only),
            fmt_opt_ratio(r.rho),
            fmt_opt_ratio(r.expertise_consistency),
        ])?;
    }
    finish(w)
}

pub fn read_divergence_csv(text: &str) -> Result<Vec<DivergenceRecord>> {
    const WHAT: &str = "divergence csv";
    let mut r = reader(text, DIVERGENCE_COLUMNS, WHAT)?;
    r.records()
        .map(|rec| {
            let rec = rec?;
            let ratio = |i: usize| -> Result<f64> {
                parse_opt_ratio(&rec[i], WHAT)?
                    .ok_or_else(|| Error::parse(WHAT, format!("missing column {i}")))
            };
            Ok(DivergenceRecord {
                path: rec[0].to_string(),
                n_common: parse_count(&rec[1], WHAT)? as usize,
                n_commit_only: parse_count(&rec[2], WHAT)? as usize,
                n_line_only: parse_count(&rec[3], WHAT)? as usize,
                common: ratio(4)?,
                commit_only: ratio(5)?,
                line_only: ratio(6)?,
                rho: parse_opt_ratio(&rec[7], WHAT)?,
                expertise_consistency: parse_opt_ratio(&rec[8], WHAT)?,
            })
        })
        .collect()
}

pub fn feature_columns(table: &FeatureTable) -> Vec<String> {
    let mut cols: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    cols.extend(table.extra_columns.iter().cloned());
    if table.has_labels {
        cols.push("defective".to_string());
    }
    cols
}

pub fn write_features_csv(table: &FeatureTable) -> Result<String> {
    let mut w = writer();
    w.write_record(feature_columns(table))?;
    for r in &table.rows {
        let mut fields = vec![
            r.release_name.clone(),
            r.path.clone(),
            fmt_ratio(r.OWN_COMMIT),
            fmt_ratio(r.OWN_LINE),
            r.MAJOR_COMMIT.to_string(),
            r.MINOR_COMMIT.to_string(),
            r.MAJOR_LINE.to_string(),
            r.MINOR_LINE.to_string(),
            r.COMMITS.to_string(),
            r.ADDED_LINES.to_string(),
            r.DEL_LINES.to_string(),
            r.NDEV.to_string(),
            r.LOC.to_string(),
        ];
        fields.extend(r.extra.iter().cloned());
        if table.has_labels {
            fields.push(match r.defective {
                Some(true) => "1".into(),
                Some(false) => "0".into(),
                None => String::new(),
            });
        }
        w.write_record(&fields)?;
    }
    finish(w)
}

pub fn read_features_csv(text: &str) -> Result<FeatureTable> {
    const WHAT: &str = "features csv";
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    let base = BASE_COLUMNS.len();
    if headers.len() < base || headers.iter().take(base).ne(BASE_COLUMNS.iter().copied()) {
        return Err(Error::parse(WHAT, format!("unexpected header {headers:?}")));
    }
    let has_labels = headers.iter().last() == Some("defective");
    let extra_end = headers.len() - usize::from(has_labels);
    let extra_columns: Vec<String> = headers.iter().skip(base).take(extra_end - base).map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let count = |i: usize| parse_count(&rec[i], WHAT);
        let ratio = |i: usize| -> Result<f64> {
            parse_opt_ratio(&rec[i], WHAT)?.ok_or_else(|| Error::parse(WHAT, "missing ratio"))
        };
        let defective = if has_labels {
            match &rec[extra_end] {
                "1" => Some(true),
                "0" => Some(false),
                "" => None,
                other => return Err(Error::parse(WHAT, format!("bad label {other:?}"))),
            }
        } else {
            None
        };
        rows.push(FeatureVector {
            release_name: rec[0].to_string(),
            path: rec[1].to_string(),
            OWN_COMMIT: ratio(2)?,
            OWN_LINE: ratio(3)?,
            MAJOR_COMMIT: count(4)?,
            MINOR_COMMIT: count(5)?,
            MAJOR_LINE: count(6)?,
            MINOR_LINE: count(7)?,
            COMMITS: count(8)?,
            ADDED_LINES: count(9)?,
            DEL_LINES: count(10)?,
            NDEV: count(11)?,
            LOC: count(12)?,
            extra: (base..extra_end).map(|i| rec[i].to_string()).collect(),
            defective,
        });
    }
    Ok(FeatureTable {
        extra_columns,
        has_labels,
        rows,
    })
}

/// Reads the `group_id,value` CSV consumed by the ranking command. A header
/// row is required. Groups keep the order of first appearance.
pub fn read_npsk_input(text: &str) -> Result<Vec<(String, Vec<f64>)>> {
    const WHAT: &str = "npsk input";
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = r.headers()?;
    if headers.len() != 2 {
        return Err(Error::parse(WHAT, "expected two columns: group_id,value"));
    }
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 || rec[0].is_empty() {
            return Err(Error::parse(WHAT, format!("row {}: expected group_id,value", line + 2)));
        }
        let value: f64 = rec[1]
            .parse()
            .map_err(|e| Error::parse(WHAT, format!("row {}: {:?}: {e}", line + 2, &rec[1])))?;
        if !value.is_finite() {
            return Err(Error::parse(WHAT, format!("row {}: non-finite value", line + 2)));
        }
        let id = rec[0].to_string();
        if !groups.contains_key(&id) {
            order.push(id.clone());
        }
        groups.entry(id).or_default().push(value);
    }
    Ok(order
        .into_iter()
        .map(|id| {
            let values = groups.remove(&id).unwrap_or_default();
            (id, values)
        })
        .collect())
}

pub fn write_npsk_output(ranks: &RankAssignment) -> Result<String> {
    let mut w = writer();
    w.write_record(["group_id", "rank"])?;
    for (id, rank) in ranks.iter() {
        w.write_record([id.to_string(), rank.to_string()])?;
    }
    finish(w)
}

/// Sorted-key, pretty-printed JSON with a trailing newline.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)?;
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

pub fn write_summary_json(summary: &ReleaseSummary) -> Result<String> {
    to_sorted_json(summary)
}
