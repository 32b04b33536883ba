//! The `codeown` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigFile, RunConfig, WindowSpec};
use crate::divergence::divergence_report;
use crate::error::{Error, Result};
use crate::features::{build_features, ExternalConfounders, Labels};
use crate::identity::AliasMap;
use crate::miner::{build_snapshot, MineConfig};
use crate::ownership::ProfileBuilder;
use crate::report;
use crate::snapshot::{write_atomic, ReleaseSnapshot};
use crate::stats::npsk_rank;

#[derive(Debug, Parser)]
#[command(name = "codeown", version, about = "Commit- and line-based code ownership mining")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory for snapshots and reports.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Expertise threshold; ownership strictly above it is major.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,

    /// Comma-separated file extensions to analyse (default .java).
    #[arg(long, global = true, value_delimiter = ',')]
    pub extensions: Option<Vec<String>>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct WindowArgs {
    /// Repository to mine.
    #[arg(long)]
    pub repo: Option<PathBuf>,

    /// Release window as NAME=[PRED..]REL; repeatable.
    #[arg(long = "window")]
    pub windows: Vec<String>,

    /// CSV with raw_key,canonical_key rows.
    #[arg(long)]
    pub alias_map: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine one snapshot per release window.
    Mine(WindowArgs),
    /// Write ownership, divergence and summary reports from snapshots.
    Analyze(WindowArgs),
    /// Write per-file feature rows from snapshots.
    Features {
        #[command(flatten)]
        windows: WindowArgs,
        /// path,defective CSV (used for every window without its own).
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Extra per-file columns keyed by a `path` column (single window only).
        #[arg(long)]
        confounders: Option<PathBuf>,
    },
    /// Rank groups from a group_id,value CSV.
    Npsk {
        input: PathBuf,
        /// Output CSV; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("codeown: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Version => {
            println!("codeown {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
        Command::Npsk { input, output } => cmd_npsk(input, output.as_deref()),
        Command::Mine(w) => cmd_mine(&resolve_config(&cli, w)?),
        Command::Analyze(w) => cmd_analyze(&resolve_config(&cli, w)?),
        Command::Features {
            windows,
            labels,
            confounders,
        } => {
            let mut cfg = resolve_config(&cli, windows)?;
            if labels.is_some() {
                cfg.labels_path = labels.clone();
            }
            if let Some(path) = confounders {
                if cfg.windows.len() != 1 {
                    return Err(Error::Config(
                        "--confounders needs exactly one window; use the config file for several"
                            .into(),
                    ));
                }
                cfg.windows[0].confounders_path = Some(path.clone());
            }
            cmd_features(&cfg)
        }
    }
}

fn resolve_config(cli: &Cli, w: &WindowArgs) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(ConfigFile::load(path)?),
        None => RunConfig::default(),
    };
    if let Some(dir) = &cli.out_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(t) = cli.threshold {
        cfg.expertise_threshold = t;
    }
    if let Some(exts) = &cli.extensions {
        cfg.extensions = exts.clone();
    }
    if let Some(repo) = &w.repo {
        cfg.repo_path = repo.clone();
    }
    if let Some(alias) = &w.alias_map {
        cfg.alias_map_path = Some(alias.clone());
    }
    if !w.windows.is_empty() {
        cfg.windows = w
            .windows
            .iter()
            .map(|a| WindowSpec::parse_arg(a))
            .collect::<Result<_>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn emit(path: &Path, contents: &str) -> Result<()> {
    write_atomic(path, contents.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_mine(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(&cfg.output_dir)?;
    let aliases = match &cfg.alias_map_path {
        Some(path) => AliasMap::load(path)?,
        None => AliasMap::new(),
    };
    let mine = MineConfig {
        extensions: cfg.extensions.clone(),
        aliases,
    };
    // Mine everything before writing anything, so a bad ref in a later
    // window leaves no outputs from this run.
    let snapshots = cfg
        .windows
        .iter()
        .map(|spec| build_snapshot(&cfg.repo_path, &spec.window, &mine))
        .collect::<Result<Vec<_>>>()?;
    for snap in &snapshots {
        emit(&cfg.snapshot_path(&snap.window.release_name), &snap.to_json()?)?;
    }
    Ok(())
}

fn load_snapshot(cfg: &RunConfig, release: &str) -> Result<ReleaseSnapshot> {
    let path = cfg.snapshot_path(release);
    if !path.is_file() {
        return Err(Error::NotFound(format!(
            "snapshot {} (run `codeown mine` first)",
            path.display()
        )));
    }
    let snap = ReleaseSnapshot::load(&path)?;
    snap.validate()?;
    Ok(snap)
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(&cfg.output_dir)?;
    for spec in &cfg.windows {
        let name = &spec.window.release_name;
        let snap = load_snapshot(cfg, name)?;
        let profiles = ProfileBuilder::new(&snap, cfg.expertise_threshold)?.release_profiles();
        let divergence = divergence_report(name, &profiles);
        emit(
            &cfg.output_path(name, "ownership.csv"),
            &report::write_ownership_csv(&report::ownership_rows(&profiles))?,
        )?;
        emit(
            &cfg.output_path(name, "divergence.csv"),
            &report::write_divergence_csv(&divergence.records)?,
        )?;
        emit(
            &cfg.output_path(name, "summary.json"),
            &report::write_summary_json(&divergence.summary)?,
        )?;
    }
    Ok(())
}

pub fn cmd_features(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(&cfg.output_dir)?;
    for spec in &cfg.windows {
        let name = &spec.window.release_name;
        let snap = load_snapshot(cfg, name)?;
        let labels = cfg.labels_for(spec).map(Labels::load).transpose()?;
        let confounders = spec
            .confounders_path
            .as_deref()
            .map(ExternalConfounders::load)
            .transpose()?;
        let table = build_features(
            &snap,
            cfg.expertise_threshold,
            labels.as_ref(),
            confounders.as_ref(),
        )?;
        emit(
            &cfg.output_path(name, "features.csv"),
            &report::write_features_csv(&table)?,
        )?;
    }
    Ok(())
}

pub fn cmd_npsk(input: &Path, output: Option<&Path>) -> Result<()> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let groups = report::read_npsk_input(&text)?;
    let ranks = npsk_rank(groups);
    let csv = report::write_npsk_output(&ranks)?;
    match output {
        Some(path) => write_atomic(path, csv.as_bytes()),
        None => std::io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}
