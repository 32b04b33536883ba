//! Release snapshot: every piece of contribution evidence for one release
//! window, plus its on-disk JSON form.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identity::DeveloperIdentity;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReleaseWindow {
    pub release_ref: String,
    /// Empty for the first studied release.
    #[serde(default)]
    pub predecessor_ref: String,
    pub release_name: String,
}

impl ReleaseWindow {
    pub fn new(
        release_name: impl Into<String>,
        predecessor_ref: impl Into<String>,
        release_ref: impl Into<String>,
    ) -> Self {
        Self {
            release_ref: release_ref.into(),
            predecessor_ref: predecessor_ref.into(),
            release_name: release_name.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileChange {
    pub path: String,
    pub lines_added: u64,
    pub lines_deleted: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub hash: String,
    pub author: DeveloperIdentity,
    pub timestamp: i64,
    pub is_merge: bool,
    pub file_changes: Vec<FileChange>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineAuthorship {
    pub path: String,
    pub author_line_counts: BTreeMap<String, u64>,
    pub total_lines: u64,
}

impl LineAuthorship {
    pub fn empty(path: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            ..Self::default()
        }
    }

    pub fn add_line(&mut self, key: &str) {
        *self.author_line_counts.entry(key.to_string()).or_insert(0) += 1;
        self.total_lines += 1;
    }
}

/// Mining configuration recorded alongside the evidence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotConfig {
    pub extensions: Vec<String>,
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReleaseSnapshot {
    pub window: ReleaseWindow,
    pub commits: Vec<CommitRecord>,
    pub file_authorship: BTreeMap<String, LineAuthorship>,
    pub config: SnapshotConfig,
}

impl ReleaseSnapshot {
    pub fn file_filter(&self) -> &[String] {
        &self.config.extensions
    }

    /// Non-merge commits, the only ones that count toward ownership.
    pub fn counted_commits(&self) -> impl Iterator<Item = &CommitRecord> {
        self.commits.iter().filter(|c| !c.is_merge)
    }

    /// Serializes with lexicographically sorted keys, two-space indent and a
    /// trailing newline. Identical snapshots always produce identical bytes.
    pub fn to_json(&self) -> Result<String> {
        // serde_json::Value objects are BTreeMap-backed, which sorts keys.
        let value = serde_json::to_value(self)?;
        let mut out = serde_json::to_string_pretty(&value)?;
        out.push('\n');
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Writes through a temporary file in the destination directory so a
    /// failed run never leaves a partial snapshot behind.
    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    /// Checks the structural invariants; returns the first violation found.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for commit in &self.commits {
            if !seen.insert(commit.hash.as_str()) {
                return Err(Error::parse(
                    "snapshot",
                    format!("duplicate commit {}", commit.hash),
                ));
            }
        }
        for (path, authorship) in &self.file_authorship {
            let sum: u64 = authorship.author_line_counts.values().sum();
            if sum != authorship.total_lines || &authorship.path != path {
                return Err(Error::parse(
                    "snapshot",
                    format!("inconsistent line authorship for {path}"),
                ));
            }
        }
        Ok(())
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
