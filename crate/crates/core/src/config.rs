//! Run configuration: a TOML file, overridable from the command line.
//!
//! ```toml
//! repo = "../project"
//! out_dir = "out"
//! threshold = 0.05
//! extensions = [".java"]
//! alias_map = "aliases.csv"
//!
//! [[window]]
//! name = "1.0"
//! release = "v1.0"
//!
//! [[window]]
//! name = "1.1"
//! predecessor = "v1.0"
//! release = "v1.1"
//! labels = "labels-1.1.csv"
//! confounders = "metrics-1.1.csv"
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::miner::{normalize_extensions, DEFAULT_EXTENSIONS};
use crate::ownership::{validate_threshold, DEFAULT_EXPERTISE_THRESHOLD};
use crate::snapshot::ReleaseWindow;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub repo: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub extensions: Option<Vec<String>>,
    pub alias_map: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    #[serde(default, rename = "window")]
    pub windows: Vec<WindowEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub name: String,
    pub release: String,
    #[serde(default)]
    pub predecessor: String,
    pub labels: Option<PathBuf>,
    pub confounders: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ConfigFile = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(inner) = p {
                if inner.is_relative() {
                    *inner = base.join(&*inner);
                }
            }
        };
        rebase(&mut cfg.repo);
        rebase(&mut cfg.out_dir);
        rebase(&mut cfg.alias_map);
        rebase(&mut cfg.labels);
        for w in &mut cfg.windows {
            rebase(&mut w.labels);
            rebase(&mut w.confounders);
        }
        Ok(cfg)
    }
}

/// One window plus its per-release side inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    pub window: ReleaseWindow,
    pub labels_path: Option<PathBuf>,
    pub confounders_path: Option<PathBuf>,
}

impl WindowSpec {
    pub fn new(window: ReleaseWindow) -> Self {
        Self {
            window,
            labels_path: None,
            confounders_path: None,
        }
    }

    /// Parses `NAME=REL` or `NAME=PRED..REL`.
    pub fn parse_arg(arg: &str) -> Result<Self> {
        let (name, range) = arg
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("window '{arg}' must look like NAME=[PRED..]REL")))?;
        let (pred, rel) = match range.split_once("..") {
            Some((p, r)) => (p, r),
            None => ("", range),
        };
        if name.is_empty() || rel.is_empty() {
            return Err(Error::Config(format!(
                "window '{arg}' must look like NAME=[PRED..]REL"
            )));
        }
        Ok(Self::new(ReleaseWindow::new(name, pred, rel)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub repo_path: PathBuf,
    pub windows: Vec<WindowSpec>,
    pub expertise_threshold: f64,
    pub extensions: Vec<String>,
    pub alias_map_path: Option<PathBuf>,
    /// Applies to every window that has no labels of its own.
    pub labels_path: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            repo_path: PathBuf::from("."),
            windows: Vec::new(),
            expertise_threshold: DEFAULT_EXPERTISE_THRESHOLD,
            extensions: DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            alias_map_path: None,
            labels_path: None,
            output_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn from_file(cfg: ConfigFile) -> Self {
        let mut run = RunConfig::default();
        if let Some(repo) = cfg.repo {
            run.repo_path = repo;
        }
        if let Some(out) = cfg.out_dir {
            run.output_dir = out;
        }
        if let Some(t) = cfg.threshold {
            run.expertise_threshold = t;
        }
        if let Some(exts) = cfg.extensions {
            run.extensions = exts;
        }
        run.alias_map_path = cfg.alias_map;
        run.labels_path = cfg.labels;
        run.windows = cfg
            .windows
            .into_iter()
            .map(|w| WindowSpec {
                window: ReleaseWindow::new(w.name, w.predecessor, w.release),
                labels_path: w.labels,
                confounders_path: w.confounders,
            })
            .collect();
        run
    }

    pub fn validate(&self) -> Result<()> {
        validate_threshold(self.expertise_threshold)?;
        if self.windows.is_empty() {
            return Err(Error::Config("no release windows configured".into()));
        }
        if normalize_extensions(&self.extensions).is_empty() {
            return Err(Error::Config("extension list is empty".into()));
        }
        let mut names = BTreeSet::new();
        for spec in &self.windows {
            let name = &spec.window.release_name;
            if name.is_empty()
                || name.starts_with('.')
                || name.contains(['/', '\\', '\0'])
            {
                return Err(Error::Config(format!(
                    "release name '{name}' cannot be used as a file name"
                )));
            }
            if !names.insert(name.as_str()) {
                return Err(Error::Config(format!("duplicate release name '{name}'")));
            }
        }
        Ok(())
    }

    pub fn snapshot_path(&self, release: &str) -> PathBuf {
        self.output_dir.join(format!("{release}.snapshot.json"))
    }

    pub fn output_path(&self, release: &str, kind: &str) -> PathBuf {
        self.output_dir.join(format!("{release}.{kind}"))
    }

    pub fn labels_for<'a>(&'a self, spec: &'a WindowSpec) -> Option<&'a Path> {
        spec.labels_path.as_deref().or(self.labels_path.as_deref())
    }
}
