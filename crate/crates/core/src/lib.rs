//! Commit-based and line-based code ownership at release granularity.
//!
//! The crate mines release windows out of a git repository
//! ([`miner`]), turns the evidence into per-file ownership profiles
//! ([`ownership`]), measures how the two approximations disagree
//! ([`divergence`], [`stats`]) and exports per-file modeling rows
//! ([`features`]). The `codeown` binary wraps all of it ([`cli`]).

pub mod cli;
pub mod config;
pub mod divergence;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod identity;
pub mod miner;
pub mod ownership;
pub mod report;
pub mod snapshot;
pub mod stats;

pub use error::{Error, Result};
pub use identity::{resolve_identity, AliasMap, DeveloperIdentity};
pub use miner::{blame_release_files, build_snapshot, enumerate_release_commits, MineConfig};
pub use ownership::{
    build_profile, classify_expertise, file_metrics, own_commit, own_line, ExpertiseLevel,
    FileOwnershipProfile, OwnershipMetrics,
};
pub use snapshot::{CommitRecord, FileChange, LineAuthorship, ReleaseSnapshot, ReleaseWindow};
