//! Per-file modeling rows: the six ownership metrics, size and process
//! confounders, optional pass-through confounders and an optional defect
//! label.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ownership::{file_metrics, ProfileBuilder};
use crate::snapshot::ReleaseSnapshot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FeatureVector {
    pub release_name: String,
    pub path: String,
    pub OWN_COMMIT: f64,
    pub OWN_LINE: f64,
    pub MAJOR_COMMIT: u64,
    pub MINOR_COMMIT: u64,
    pub MAJOR_LINE: u64,
    pub MINOR_LINE: u64,
    pub COMMITS: u64,
    pub ADDED_LINES: u64,
    pub DEL_LINES: u64,
    pub NDEV: u64,
    pub LOC: u64,
    /// Values for [`FeatureTable::extra_columns`], in the same order.
    pub extra: Vec<String>,
    pub defective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub extra_columns: Vec<String>,
    pub has_labels: bool,
    pub rows: Vec<FeatureVector>,
}

/// Defect labels keyed by path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels(pub BTreeMap<String, bool>);

impl Labels {
    /// Reads a `path,defective` CSV. Duplicated paths are a configuration
    /// error; labels must be 0 or 1.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let path_col = column_index(&headers, "path")?;
        let label_col = column_index(&headers, "defective")?;
        let mut map = BTreeMap::new();
        for record in reader.records() {
            let record = record?;
            let path = record.get(path_col).unwrap_or_default().to_string();
            let label = match record.get(label_col).map(str::trim) {
                Some("1") => true,
                Some("0") => false,
                other => {
                    return Err(Error::Config(format!(
                        "label for {path} must be 0 or 1, got {other:?}"
                    )))
                }
            };
            if map.insert(path.clone(), label).is_some() {
                return Err(Error::Config(format!("duplicate label for {path}")));
            }
        }
        Ok(Labels(map))
    }
}

/// Caller-supplied confounder columns keyed by path; values pass through
/// verbatim.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExternalConfounders {
    pub columns: Vec<String>,
    pub rows: BTreeMap<String, Vec<String>>,
}

impl ExternalConfounders {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let path_col = column_index(&headers, "path")?;
        let columns: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != path_col)
            .map(|(_, h)| h.to_string())
            .collect();
        for name in &columns {
            if BASE_COLUMNS.contains(&name.as_str()) || name == "defective" {
                return Err(Error::Config(format!(
                    "confounder column '{name}' clashes with a built-in column"
                )));
            }
        }
        let mut rows = BTreeMap::new();
        for record in reader.records() {
            let record = record?;
            let path = record.get(path_col).unwrap_or_default().to_string();
            let values = record
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != path_col)
                .map(|(_, v)| v.to_string())
                .collect();
            if rows.insert(path.clone(), values).is_some() {
                return Err(Error::Config(format!("duplicate confounder row for {path}")));
            }
        }
        Ok(Self { columns, rows })
    }
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Config(format!("missing '{name}' column")))
}

/// Built-in columns, in output order. Extra confounders follow, then
/// `defective` when labels are supplied.
pub const BASE_COLUMNS: &[&str] = &[
    "release_name",
    "path",
    "OWN_COMMIT",
    "OWN_LINE",
    "MAJOR_COMMIT",
    "MINOR_COMMIT",
    "MAJOR_LINE",
    "MINOR_LINE",
    "COMMITS",
    "ADDED_LINES",
    "DEL_LINES",
    "NDEV",
    "LOC",
];

/// One row per file present at the release ref, sorted by path.
pub fn build_features(
    snapshot: &ReleaseSnapshot,
    threshold: f64,
    labels: Option<&Labels>,
    confounders: Option<&ExternalConfounders>,
) -> Result<FeatureTable> {
    let builder = ProfileBuilder::new(snapshot, threshold)?;
    let release = &snapshot.window.release_name;

    if let Some(labels) = labels {
        for path in labels.0.keys() {
            if !snapshot.file_authorship.contains_key(path) {
                log::warn!("{release}: labelled path {path} is not present at the release ref");
            }
        }
    }
    let extra_columns = confounders.map(|c| c.columns.clone()).unwrap_or_default();

    let mut rows = Vec::with_capacity(snapshot.file_authorship.len());
    for profile in builder.release_profiles() {
        let metrics = file_metrics(&profile);
        let activity = builder.index().activity(&profile.path);
        let extra = match confounders {
            Some(c) => c
                .rows
                .get(&profile.path)
                .cloned()
                .unwrap_or_else(|| vec![String::new(); c.columns.len()]),
            None => Vec::new(),
        };
        rows.push(FeatureVector {
            release_name: release.clone(),
            OWN_COMMIT: metrics.OWN_COMMIT,
            OWN_LINE: metrics.OWN_LINE,
            MAJOR_COMMIT: metrics.MAJOR_COMMIT,
            MINOR_COMMIT: metrics.MINOR_COMMIT,
            MAJOR_LINE: metrics.MAJOR_LINE,
            MINOR_LINE: metrics.MINOR_LINE,
            COMMITS: activity.map_or(0, |a| a.commits),
            ADDED_LINES: activity.map_or(0, |a| a.lines_added),
            DEL_LINES: activity.map_or(0, |a| a.lines_deleted),
            NDEV: profile.per_developer.len() as u64,
            LOC: profile.total_lines,
            extra,
            defective: labels.and_then(|l| l.0.get(&profile.path).copied()),
            path: profile.path,
        });
    }
    Ok(FeatureTable {
        extra_columns,
        has_labels: labels.is_some(),
        rows,
    })
}

/// Paths labelled in `labels` but absent from the snapshot.
pub fn unmatched_labels<'a>(labels: &'a Labels, snapshot: &ReleaseSnapshot) -> BTreeSet<&'a str> {
    labels
        .0
        .keys()
        .filter(|p| !snapshot.file_authorship.contains_key(*p))
        .map(String::as_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse_and_reject_duplicates() {
        let labels = Labels::parse("path,defective\nA.java,1\nB.java,0\n").unwrap();
        assert_eq!(labels.0.get("A.java"), Some(&true));
        assert!(matches!(
            Labels::parse("path,defective\nA.java,1\nA.java,0\n"),
            Err(Error::Config(_))
        ));
        assert!(Labels::parse("path,defective\nA.java,yes\n").is_err());
        assert!(Labels::parse("file,defective\nA.java,1\n").is_err());
    }

    #[test]
    fn confounders_keep_column_order() {
        let c = ExternalConfounders::parse("wmc,path,cbo\n3,A.java,7\n").unwrap();
        assert_eq!(c.columns, vec!["wmc", "cbo"]);
        assert_eq!(c.rows["A.java"], vec!["3", "7"]);
        assert!(ExternalConfounders::parse("path,LOC\nA.java,1\n").is_err());
    }
}
