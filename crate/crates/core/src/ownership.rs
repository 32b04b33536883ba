//! Commit-based and line-based ownership, expertise levels, and the six
//! per-file ownership metrics.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snapshot::ReleaseSnapshot;

/// Ownership above this share makes a developer major.
pub const DEFAULT_EXPERTISE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Approach {
    Commit,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OwnershipValue {
    pub approach: Approach,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExpertiseLevel {
    Minor,
    Major,
}

impl ExpertiseLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpertiseLevel::Major => "major",
            ExpertiseLevel::Minor => "minor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "major" => Some(ExpertiseLevel::Major),
            "minor" => Some(ExpertiseLevel::Minor),
            _ => None,
        }
    }
}

/// Major iff `value` is strictly above `threshold`.
pub fn classify_expertise(value: f64, threshold: f64) -> ExpertiseLevel {
    if value > threshold {
        ExpertiseLevel::Major
    } else {
        ExpertiseLevel::Minor
    }
}

pub fn validate_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "expertise threshold must lie in (0, 1), got {threshold}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeveloperOwnership {
    pub commit_count: u64,
    pub line_count: u64,
    pub own_commit: Option<f64>,
    pub own_line: Option<f64>,
    pub level_commit: Option<ExpertiseLevel>,
    pub level_line: Option<ExpertiseLevel>,
}

impl DeveloperOwnership {
    pub fn in_commit_set(&self) -> bool {
        self.own_commit.is_some()
    }

    pub fn in_line_set(&self) -> bool {
        self.own_line.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileOwnershipProfile {
    pub path: String,
    pub total_commits: u64,
    pub total_lines: u64,
    pub per_developer: BTreeMap<String, DeveloperOwnership>,
}

impl FileOwnershipProfile {
    /// Assembles a profile from raw per-developer counts. Developers with
    /// zero commits get no commit ownership, and likewise for lines.
    pub fn from_counts(
        path: impl Into<String>,
        commit_counts: &BTreeMap<String, u64>,
        line_counts: &BTreeMap<String, u64>,
        threshold: f64,
    ) -> Self {
        let total_commits: u64 = commit_counts.values().sum();
        let total_lines: u64 = line_counts.values().sum();
        let devs: BTreeSet<&String> = commit_counts
            .iter()
            .chain(line_counts.iter())
            .filter(|(_, &n)| n > 0)
            .map(|(k, _)| k)
            .collect();

        let per_developer = devs
            .into_iter()
            .map(|dev| {
                let commit_count = commit_counts.get(dev).copied().unwrap_or(0);
                let line_count = line_counts.get(dev).copied().unwrap_or(0);
                let own_commit = ratio(commit_count, total_commits);
                let own_line = ratio(line_count, total_lines);
                let entry = DeveloperOwnership {
                    commit_count,
                    line_count,
                    own_commit,
                    own_line,
                    level_commit: own_commit.map(|v| classify_expertise(v, threshold)),
                    level_line: own_line.map(|v| classify_expertise(v, threshold)),
                };
                (dev.clone(), entry)
            })
            .collect();

        Self {
            path: path.into(),
            total_commits,
            total_lines,
            per_developer,
        }
    }

    /// Developers identified by the commit-based approach.
    pub fn commit_developers(&self) -> BTreeSet<&str> {
        self.per_developer
            .iter()
            .filter(|(_, d)| d.in_commit_set())
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Developers identified by the line-based approach.
    pub fn line_developers(&self) -> BTreeSet<&str> {
        self.per_developer
            .iter()
            .filter(|(_, d)| d.in_line_set())
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn own_commit(&self, dev: &str) -> Option<f64> {
        self.per_developer.get(dev).and_then(|d| d.own_commit)
    }

    pub fn own_line(&self, dev: &str) -> Option<f64> {
        self.per_developer.get(dev).and_then(|d| d.own_line)
    }
}

fn ratio(part: u64, total: u64) -> Option<f64> {
    (part > 0 && total > 0).then(|| part as f64 / total as f64)
}

/// Per-path commit tallies for one snapshot, built in one pass over the
/// commit list. Merge commits are ignored.
#[derive(Debug, Clone, Default)]
pub struct CommitIndex {
    per_path: BTreeMap<String, PathActivity>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathActivity {
    pub commits_by_dev: BTreeMap<String, u64>,
    pub commits: u64,
    pub lines_added: u64,
    pub lines_deleted: u64,
}

impl CommitIndex {
    pub fn new(snapshot: &ReleaseSnapshot) -> Self {
        let mut per_path: BTreeMap<String, PathActivity> = BTreeMap::new();
        for commit in snapshot.counted_commits() {
            // A path listed twice in one commit still counts as one commit.
            let mut touched = BTreeSet::new();
            for change in &commit.file_changes {
                let activity = per_path.entry(change.path.clone()).or_default();
                activity.lines_added += change.lines_added;
                activity.lines_deleted += change.lines_deleted;
                if touched.insert(change.path.as_str()) {
                    activity.commits += 1;
                    *activity
                        .commits_by_dev
                        .entry(commit.author.key.clone())
                        .or_insert(0) += 1;
                }
            }
        }
        Self { per_path }
    }

    pub fn activity(&self, path: &str) -> Option<&PathActivity> {
        self.per_path.get(path)
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.per_path.keys().map(String::as_str)
    }
}

/// Builds profiles for many paths against one snapshot.
pub struct ProfileBuilder<'a> {
    snapshot: &'a ReleaseSnapshot,
    index: CommitIndex,
    threshold: f64,
}

impl<'a> ProfileBuilder<'a> {
    pub fn new(snapshot: &'a ReleaseSnapshot, threshold: f64) -> Result<Self> {
        validate_threshold(threshold)?;
        Ok(Self {
            snapshot,
            index: CommitIndex::new(snapshot),
            threshold,
        })
    }

    pub fn index(&self) -> &CommitIndex {
        &self.index
    }

    pub fn profile(&self, path: &str) -> Result<FileOwnershipProfile> {
        let activity = self.index.activity(path);
        let authorship = self.snapshot.file_authorship.get(path);
        if activity.is_none() && authorship.is_none() {
            return Err(Error::NotFound(format!(
                "{path} has neither window commits nor lines at {}",
                self.snapshot.window.release_ref
            )));
        }
        let empty = BTreeMap::new();
        let commits = activity.map(|a| &a.commits_by_dev).unwrap_or(&empty);
        let lines = authorship.map(|a| &a.author_line_counts).unwrap_or(&empty);
        Ok(FileOwnershipProfile::from_counts(
            path,
            commits,
            lines,
            self.threshold,
        ))
    }

    /// Profiles of every file present at the release ref, path-sorted.
    pub fn release_profiles(&self) -> Vec<FileOwnershipProfile> {
        self.snapshot
            .file_authorship
            .keys()
            .map(|path| self.profile(path).expect("path comes from the snapshot"))
            .collect()
    }
}

pub fn build_profile(
    path: &str,
    snapshot: &ReleaseSnapshot,
    threshold: f64,
) -> Result<FileOwnershipProfile> {
    ProfileBuilder::new(snapshot, threshold)?.profile(path)
}

/// Commit ownership of `dev` on `path`, or `None` when the file has no
/// counted commits in the window or the developer made none of them.
pub fn own_commit(dev: &str, path: &str, snapshot: &ReleaseSnapshot) -> Option<f64> {
    let index = CommitIndex::new(snapshot);
    let activity = index.activity(path)?;
    ratio(
        activity.commits_by_dev.get(dev).copied().unwrap_or(0),
        activity.commits,
    )
}

/// Line ownership of `dev` on `path` at the release ref.
pub fn own_line(dev: &str, path: &str, snapshot: &ReleaseSnapshot) -> Option<f64> {
    let authorship = snapshot.file_authorship.get(path)?;
    ratio(
        authorship.author_line_counts.get(dev).copied().unwrap_or(0),
        authorship.total_lines,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct OwnershipMetrics {
    pub path: String,
    pub OWN_COMMIT: f64,
    pub OWN_LINE: f64,
    pub MAJOR_COMMIT: u64,
    pub MINOR_COMMIT: u64,
    pub MAJOR_LINE: u64,
    pub MINOR_LINE: u64,
}

/// File-level metrics: the top contributor's share under each approach and
/// the number of major/minor developers per approach.
pub fn file_metrics(profile: &FileOwnershipProfile) -> OwnershipMetrics {
    let mut m = OwnershipMetrics {
        path: profile.path.clone(),
        OWN_COMMIT: 0.0,
        OWN_LINE: 0.0,
        MAJOR_COMMIT: 0,
        MINOR_COMMIT: 0,
        MAJOR_LINE: 0,
        MINOR_LINE: 0,
    };
    for dev in profile.per_developer.values() {
        if let Some(v) = dev.own_commit {
            m.OWN_COMMIT = m.OWN_COMMIT.max(v);
        }
        if let Some(v) = dev.own_line {
            m.OWN_LINE = m.OWN_LINE.max(v);
        }
        match dev.level_commit {
            Some(ExpertiseLevel::Major) => m.MAJOR_COMMIT += 1,
            Some(ExpertiseLevel::Minor) => m.MINOR_COMMIT += 1,
            None => {}
        }
        match dev.level_line {
            Some(ExpertiseLevel::Major) => m.MAJOR_LINE += 1,
            Some(ExpertiseLevel::Minor) => m.MINOR_LINE += 1,
            None => {}
        }
    }
    m
}
