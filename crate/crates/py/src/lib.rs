//! Python bindings for codeown.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use codeown::divergence::{self, divergence_report};
use codeown::features::build_features;
use codeown::ownership::{self, ProfileBuilder};
use codeown::stats::{self, Alternative};
use codeown::{fixtures, report, AliasMap, MineConfig, ReleaseSnapshot, ReleaseWindow};

create_exception!(codeown_py, CodeownError, PyException);

fn to_py(err: codeown::Error) -> PyErr {
    CodeownError::new_err(err.to_string())
}

fn stats_err(err: stats::StatsError) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn alias_map(aliases: Option<BTreeMap<String, String>>) -> PyResult<AliasMap> {
    match aliases {
        Some(map) => AliasMap::from_pairs(map).map_err(to_py),
        None => Ok(AliasMap::new()),
    }
}

/// Canonical developer key for a (name, email) pair.
#[pyfunction]
#[pyo3(signature = (name, email, aliases=None))]
fn resolve_identity(
    name: &str,
    email: &str,
    aliases: Option<BTreeMap<String, String>>,
) -> PyResult<String> {
    let aliases = alias_map(aliases)?;
    codeown::resolve_identity(name, email, Some(&aliases), "<python>")
        .map(|id| id.key)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (value, threshold=ownership::DEFAULT_EXPERTISE_THRESHOLD))]
fn classify_expertise(value: f64, threshold: f64) -> &'static str {
    ownership::classify_expertise(value, threshold).as_str()
}

/// Returns `(rho, magnitude)`.
#[pyfunction]
fn spearman_rho(x: Vec<f64>, y: Vec<f64>) -> PyResult<(f64, &'static str)> {
    let r = stats::spearman_rho(&x, &y).map_err(stats_err)?;
    Ok((r.rho, r.magnitude.as_str()))
}

/// One-sided rank-sum p-value; `alternative` is "greater" or "less".
#[pyfunction]
#[pyo3(signature = (x, y, alternative="greater"))]
fn wilcoxon_one_sided(x: Vec<f64>, y: Vec<f64>, alternative: &str) -> PyResult<f64> {
    let alt = match alternative {
        "greater" => Alternative::Greater,
        "less" => Alternative::Less,
        other => {
            return Err(PyValueError::new_err(format!(
                "alternative must be 'greater' or 'less', got {other:?}"
            )))
        }
    };
    stats::wilcoxon_one_sided(&x, &y, alt)
        .map(|t| t.p_value)
        .map_err(stats_err)
}

/// Returns `(delta, magnitude)`.
#[pyfunction]
fn cliffs_delta(x: Vec<f64>, y: Vec<f64>) -> (f64, &'static str) {
    let r = stats::cliffs_delta(&x, &y);
    (r.delta, r.magnitude.as_str())
}

/// Maps each group id to its rank (1 = highest median).
#[pyfunction]
fn npsk_rank(groups: BTreeMap<String, Vec<f64>>) -> BTreeMap<String, u32> {
    stats::npsk_rank(groups)
        .iter()
        .map(|(id, rank)| (id.to_string(), rank))
        .collect()
}

/// Builds one of the scripted scenario repositories ("scenario1",
/// "scenario2", "scenario3", "combined") at `path`.
#[pyfunction]
fn build_fixture(kind: &str, path: PathBuf) -> PyResult<()> {
    let result = match kind {
        "scenario1" => fixtures::scenario_one(&path),
        "scenario2" => fixtures::scenario_two(&path),
        "scenario3" => fixtures::scenario_three(&path),
        "combined" => fixtures::combined(&path),
        other => return Err(PyValueError::new_err(format!("unknown fixture {other:?}"))),
    };
    result.map(|_| ()).map_err(to_py)
}

#[pyclass(module = "codeown_py", frozen, skip_from_py_object, name = "DeveloperOwnership")]
#[derive(Clone)]
struct PyDeveloperOwnership {
    #[pyo3(get)]
    key: String,
    #[pyo3(get)]
    commit_count: u64,
    #[pyo3(get)]
    line_count: u64,
    #[pyo3(get)]
    own_commit: Option<f64>,
    #[pyo3(get)]
    own_line: Option<f64>,
    #[pyo3(get)]
    level_commit: Option<&'static str>,
    #[pyo3(get)]
    level_line: Option<&'static str>,
}

#[pymethods]
impl PyDeveloperOwnership {
    fn __repr__(&self) -> String {
        format!(
            "DeveloperOwnership(key={:?}, own_commit={:?}, own_line={:?})",
            self.key, self.own_commit, self.own_line
        )
    }
}

#[pyclass(module = "codeown_py", frozen, name = "FileOwnershipProfile")]
struct PyProfile {
    inner: ownership::FileOwnershipProfile,
}

#[pymethods]
impl PyProfile {
    #[getter]
    fn path(&self) -> &str {
        &self.inner.path
    }

    #[getter]
    fn total_commits(&self) -> u64 {
        self.inner.total_commits
    }

    #[getter]
    fn total_lines(&self) -> u64 {
        self.inner.total_lines
    }

    fn developers(&self) -> Vec<PyDeveloperOwnership> {
        self.inner
            .per_developer
            .iter()
            .map(|(key, d)| PyDeveloperOwnership {
                key: key.clone(),
                commit_count: d.commit_count,
                line_count: d.line_count,
                own_commit: d.own_commit,
                own_line: d.own_line,
                level_commit: d.level_commit.map(|l| l.as_str()),
                level_line: d.level_line.map(|l| l.as_str()),
            })
            .collect()
    }

    /// The six file-level ownership metrics.
    fn metrics(&self) -> BTreeMap<&'static str, f64> {
        let m = ownership::file_metrics(&self.inner);
        BTreeMap::from([
            ("OWN_COMMIT", m.OWN_COMMIT),
            ("OWN_LINE", m.OWN_LINE),
            ("MAJOR_COMMIT", m.MAJOR_COMMIT as f64),
            ("MINOR_COMMIT", m.MINOR_COMMIT as f64),
            ("MAJOR_LINE", m.MAJOR_LINE as f64),
            ("MINOR_LINE", m.MINOR_LINE as f64),
        ])
    }

    /// `(common, commit_only, line_only)` or None when nobody is identified.
    fn overlap(&self) -> Option<(f64, f64, f64)> {
        divergence::set_overlap(&self.inner).map(|o| (o.common, o.commit_only, o.line_only))
    }

    fn correlation(&self) -> Option<f64> {
        divergence::ownership_correlation(&self.inner)
    }

    fn expertise_consistency(&self) -> Option<f64> {
        divergence::expertise_consistency(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "FileOwnershipProfile(path={:?}, developers={})",
            self.inner.path,
            self.inner.per_developer.len()
        )
    }
}

#[pyclass(module = "codeown_py", frozen, name = "ReleaseSnapshot")]
struct PySnapshot {
    inner: ReleaseSnapshot,
}

#[pymethods]
impl PySnapshot {
    /// Mines one release window of the repository at `repo`.
    #[staticmethod]
    #[pyo3(signature = (repo, release_ref, predecessor_ref="", release_name=None, extensions=None, aliases=None))]
    fn mine(
        py: Python<'_>,
        repo: PathBuf,
        release_ref: &str,
        predecessor_ref: &str,
        release_name: Option<&str>,
        extensions: Option<Vec<String>>,
        aliases: Option<BTreeMap<String, String>>,
    ) -> PyResult<Self> {
        let mut config = MineConfig {
            aliases: alias_map(aliases)?,
            ..MineConfig::default()
        };
        if let Some(exts) = extensions {
            config.extensions = exts;
        }
        let window = ReleaseWindow::new(
            release_name.unwrap_or(release_ref),
            predecessor_ref,
            release_ref,
        );
        let inner = py
            .detach(|| codeown::build_snapshot(&repo, &window, &config))
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = ReleaseSnapshot::from_json(text).map_err(to_py)?;
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[getter]
    fn release_name(&self) -> &str {
        &self.inner.window.release_name
    }

    #[getter]
    fn commit_count(&self) -> usize {
        self.inner.commits.len()
    }

    /// Paths present at the release ref.
    fn files(&self) -> Vec<String> {
        self.inner.file_authorship.keys().cloned().collect()
    }

    #[pyo3(signature = (path, threshold=ownership::DEFAULT_EXPERTISE_THRESHOLD))]
    fn profile(&self, path: &str, threshold: f64) -> PyResult<PyProfile> {
        ownership::build_profile(path, &self.inner, threshold)
            .map(|inner| PyProfile { inner })
            .map_err(to_py)
    }

    #[pyo3(signature = (threshold=ownership::DEFAULT_EXPERTISE_THRESHOLD))]
    fn profiles(&self, threshold: f64) -> PyResult<Vec<PyProfile>> {
        let builder = ProfileBuilder::new(&self.inner, threshold).map_err(to_py)?;
        Ok(builder
            .release_profiles()
            .into_iter()
            .map(|inner| PyProfile { inner })
            .collect())
    }

    /// Release summary (medians, labels, exclusive-developer comparison) as JSON.
    #[pyo3(signature = (threshold=ownership::DEFAULT_EXPERTISE_THRESHOLD))]
    fn divergence_summary_json(&self, threshold: f64) -> PyResult<String> {
        let builder = ProfileBuilder::new(&self.inner, threshold).map_err(to_py)?;
        let report = divergence_report(&self.inner.window.release_name, &builder.release_profiles());
        report::write_summary_json(&report.summary).map_err(to_py)
    }

    /// Feature rows in the CSV format written by `codeown features`.
    #[pyo3(signature = (threshold=ownership::DEFAULT_EXPERTISE_THRESHOLD))]
    fn features_csv(&self, threshold: f64) -> PyResult<String> {
        let table = build_features(&self.inner, threshold, None, None).map_err(to_py)?;
        report::write_features_csv(&table).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "ReleaseSnapshot(release={:?}, commits={}, files={})",
            self.inner.window.release_name,
            self.inner.commits.len(),
            self.inner.file_authorship.len()
        )
    }
}

#[pymodule]
fn codeown_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CodeownError", m.py().get_type::<CodeownError>())?;
    m.add_class::<PySnapshot>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyDeveloperOwnership>()?;
    m.add_function(wrap_pyfunction!(resolve_identity, m)?)?;
    m.add_function(wrap_pyfunction!(classify_expertise, m)?)?;
    m.add_function(wrap_pyfunction!(spearman_rho, m)?)?;
    m.add_function(wrap_pyfunction!(wilcoxon_one_sided, m)?)?;
    m.add_function(wrap_pyfunction!(cliffs_delta, m)?)?;
    m.add_function(wrap_pyfunction!(npsk_rank, m)?)?;
    m.add_function(wrap_pyfunction!(build_fixture, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
