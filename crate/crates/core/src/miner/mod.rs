//! Release-scoped mining of commit contributions and line authorship by
//! driving the `git` command-line client.

pub mod parse;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::identity::{resolve_identity, AliasMap};
use crate::snapshot::{
    CommitRecord, FileChange, LineAuthorship, ReleaseSnapshot, ReleaseWindow, SnapshotConfig,
};

pub const DEFAULT_EXTENSIONS: &[&str] = &[".java"];

/// Settings that shape what gets mined.
#[derive(Debug, Clone)]
pub struct MineConfig {
    pub extensions: Vec<String>,
    pub aliases: AliasMap,
}

impl Default for MineConfig {
    fn default() -> Self {
        Self {
            extensions: DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            aliases: AliasMap::new(),
        }
    }
}

/// Normalizes an extension list: leading dot, lowercase, sorted, deduplicated.
pub fn normalize_extensions<S: AsRef<str>>(exts: &[S]) -> Vec<String> {
    let mut out: Vec<String> = exts
        .iter()
        .map(|e| e.as_ref().trim().to_lowercase())
        .filter(|e| !e.is_empty() && e != ".")
        .map(|e| if e.starts_with('.') { e } else { format!(".{e}") })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn matches_filter(path: &str, extensions: &[String]) -> bool {
    let lower = path.to_lowercase();
    extensions.iter().any(|ext| lower.ends_with(ext.as_str()))
}

/// Thin handle around `git -C <repo>`.
#[derive(Debug, Clone)]
pub struct Git {
    repo: PathBuf,
}

impl Git {
    pub fn open(repo: &Path) -> Result<Self> {
        if !repo.is_dir() {
            return Err(Error::Vcs(format!(
                "{} is not a readable directory",
                repo.display()
            )));
        }
        let git = Self {
            repo: repo.to_path_buf(),
        };
        let out = git.run(&["rev-parse", "--is-shallow-repository"])?;
        if String::from_utf8_lossy(&out).trim() == "true" {
            return Err(Error::Vcs(format!(
                "{} is a shallow clone; full history is required",
                repo.display()
            )));
        }
        Ok(git)
    }

    pub fn repo(&self) -> &Path {
        &self.repo
    }

    fn command(&self) -> Command {
        let mut cmd = Command::new("git");
        cmd.arg("-C")
            .arg(&self.repo)
            .args(["-c", "core.quotepath=off", "-c", "color.ui=false"])
            .env("GIT_TERMINAL_PROMPT", "0")
            .env("LC_ALL", "C");
        cmd
    }

    pub fn run(&self, args: &[&str]) -> Result<Vec<u8>> {
        let output = self
            .command()
            .args(args)
            .output()
            .map_err(|e| Error::Vcs(format!("failed to spawn git: {e}")))?;
        if !output.status.success() {
            return Err(Error::Vcs(format!(
                "git {} failed in {}: {}",
                args.first().copied().unwrap_or_default(),
                self.repo.display(),
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        Ok(output.stdout)
    }

    /// Resolves a tag, branch or commit id to a full commit id.
    pub fn resolve_commit(&self, reference: &str) -> Result<String> {
        if reference.is_empty() || reference.starts_with('-') {
            return Err(Error::Config(format!("invalid ref '{reference}'")));
        }
        let spec = format!("{reference}^{{commit}}");
        let output = self
            .command()
            .args(["rev-parse", "--verify", "--quiet", &spec])
            .output()
            .map_err(|e| Error::Vcs(format!("failed to spawn git: {e}")))?;
        if !output.status.success() {
            return Err(Error::Config(format!(
                "ref '{reference}' does not resolve to a commit in {}",
                self.repo.display()
            )));
        }
        Ok(String::from_utf8_lossy(&output.stdout).trim().to_string())
    }

    /// Blob paths at a commit, sorted.
    pub fn list_files(&self, commit: &str) -> Result<Vec<String>> {
        let out = self.run(&["ls-tree", "-r", "-z", "--full-tree", commit])?;
        let mut paths = Vec::new();
        for entry in out.split(|&b| b == 0).filter(|e| !e.is_empty()) {
            let entry = String::from_utf8_lossy(entry);
            let Some((meta, path)) = entry.split_once('\t') else {
                return Err(Error::parse("ls-tree entry", entry.into_owned()));
            };
            let mut meta = meta.split(' ');
            let mode = meta.next().unwrap_or_default();
            let kind = meta.next().unwrap_or_default();
            // Symlinks are blobs too but carry no authored lines.
            if kind == "blob" && mode != "120000" {
                paths.push(path.to_string());
            }
        }
        paths.sort();
        Ok(paths)
    }
}

/// Commits reachable from `window.release_ref` but not from
/// `window.predecessor_ref`, oldest first in topological order, each with
/// its numstat against the first parent.
pub fn enumerate_release_commits(
    repo: &Path,
    window: &ReleaseWindow,
    aliases: Option<&AliasMap>,
) -> Result<Vec<CommitRecord>> {
    let git = Git::open(repo)?;
    enumerate_with(&git, window, aliases)
}

fn enumerate_with(
    git: &Git,
    window: &ReleaseWindow,
    aliases: Option<&AliasMap>,
) -> Result<Vec<CommitRecord>> {
    let release = git.resolve_commit(&window.release_ref)?;
    let exclude = if window.predecessor_ref.is_empty() {
        None
    } else {
        Some(format!("^{}", git.resolve_commit(&window.predecessor_ref)?))
    };
    let format = format!("--format={}", parse::LOG_FORMAT);
    let mut args = vec![
        "log",
        "--topo-order",
        "--reverse",
        "--no-renames",
        "--no-ext-diff",
        "--no-show-signature",
        "--no-color",
        "--diff-merges=first-parent",
        "--numstat",
        format.as_str(),
        release.as_str(),
    ];
    if let Some(exclude) = &exclude {
        args.push(exclude.as_str());
    }
    args.push("--");
    let out = git.run(&args)?;
    let text = String::from_utf8_lossy(&out);
    let raw = parse::parse_numstat_log(&text)?;

    raw.into_iter()
        .map(|commit| {
            let author = resolve_identity(
                &commit.author_name,
                &commit.author_email,
                aliases,
                &commit.hash,
            )?;
            let file_changes = commit
                .changes
                .iter()
                .map(|c| FileChange {
                    path: c.path.clone(),
                    lines_added: c.added.unwrap_or(0),
                    lines_deleted: c.deleted.unwrap_or(0),
                })
                .collect();
            Ok(CommitRecord {
                is_merge: commit.is_merge(),
                hash: commit.hash,
                author,
                timestamp: commit.timestamp,
                file_changes,
            })
        })
        .collect()
}

/// Per-file line authorship at `release_ref` for every file matching the
/// extension filter. Binary files are skipped.
pub fn blame_release_files(
    repo: &Path,
    release_ref: &str,
    extensions: &[String],
    aliases: Option<&AliasMap>,
) -> Result<BTreeMap<String, LineAuthorship>> {
    let git = Git::open(repo)?;
    blame_with(&git, release_ref, extensions, aliases)
}

fn blame_with(
    git: &Git,
    release_ref: &str,
    extensions: &[String],
    aliases: Option<&AliasMap>,
) -> Result<BTreeMap<String, LineAuthorship>> {
    if extensions.is_empty() {
        return Err(Error::Config("extension filter is empty".into()));
    }
    let commit = git.resolve_commit(release_ref)?;
    let files: Vec<String> = git
        .list_files(&commit)?
        .into_iter()
        .filter(|p| matches_filter(p, extensions))
        .collect();

    let results: Vec<Result<Option<LineAuthorship>>> = files
        .par_iter()
        .map(|path| blame_file(git, &commit, path, aliases))
        .collect();

    let mut map = BTreeMap::new();
    for result in results {
        if let Some(authorship) = result? {
            map.insert(authorship.path.clone(), authorship);
        }
    }
    Ok(map)
}

fn blame_file(
    git: &Git,
    commit: &str,
    path: &str,
    aliases: Option<&AliasMap>,
) -> Result<Option<LineAuthorship>> {
    let out = git.run(&[
        "blame",
        "--line-porcelain",
        "--ignore-revs-file",
        "",
        commit,
        "--",
        path,
    ])?;
    let parsed = parse::parse_line_porcelain(&out)?;
    if parsed.binary {
        log::warn!("skipping binary file {path}");
        return Ok(None);
    }
    let mut authorship = LineAuthorship::empty(path);
    // Resolve each distinct (name, email) once.
    let mut resolved: BTreeMap<(&str, &str), String> = BTreeMap::new();
    for line in &parsed.lines {
        let pair = (line.author_name.as_str(), line.author_email.as_str());
        let key = match resolved.get(&pair) {
            Some(key) => key.clone(),
            None => {
                let id = resolve_identity(pair.0, pair.1, aliases, &line.commit)?;
                resolved.insert(pair, id.key.clone());
                id.key
            }
        };
        authorship.add_line(&key);
    }
    Ok(Some(authorship))
}

/// Mines one release window into a validated snapshot.
///
/// Commit file changes are narrowed to the extension filter; changes to
/// files that are binary at the release ref are dropped as well.
pub fn build_snapshot(
    repo: &Path,
    window: &ReleaseWindow,
    config: &MineConfig,
) -> Result<ReleaseSnapshot> {
    let git = Git::open(repo)?;
    let extensions = normalize_extensions(&config.extensions);
    let aliases = Some(&config.aliases);

    let mut commits = enumerate_with(&git, window, aliases)?;
    let file_authorship = blame_with(&git, &window.release_ref, &extensions, aliases)?;
    let present: std::collections::BTreeSet<String> =
        git.list_files(&git.resolve_commit(&window.release_ref)?)?.into_iter().collect();

    for commit in &mut commits {
        commit.file_changes.retain(|change| {
            matches_filter(&change.path, &extensions)
                && (file_authorship.contains_key(&change.path) || !present.contains(&change.path))
        });
    }

    let snapshot = ReleaseSnapshot {
        window: window.clone(),
        commits,
        file_authorship,
        config: SnapshotConfig {
            extensions,
            aliases: config.aliases.entries().clone(),
        },
    };
    snapshot.validate()?;
    Ok(snapshot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_normalization() {
        assert_eq!(
            normalize_extensions(&["java", ".JAVA", " .kt ", ""]),
            vec![".java".to_string(), ".kt".to_string()]
        );
        let exts = normalize_extensions(&[".java"]);
        assert!(matches_filter("src/A.java", &exts));
        assert!(matches_filter("src/B.JAVA", &exts));
        assert!(!matches_filter("src/A.javax", &exts));
        assert!(!matches_filter("README.md", &exts));
    }

    #[test]
    fn missing_repo_is_vcs_error() {
        let err = Git::open(Path::new("/definitely/not/here")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn non_repo_directory_is_vcs_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = Git::open(dir.path()).unwrap_err();
        assert!(matches!(err, Error::Vcs(_)));
    }
}
