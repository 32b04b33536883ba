//! How far the two ownership approximations disagree: developer-set overlap,
//! value correlation, expertise consistency, and the comparison of
//! developers seen by only one approach.

use serde::{Deserialize, Serialize};

use crate::ownership::{ExpertiseLevel, FileOwnershipProfile};
use crate::stats::{
    cliffs_delta, median, spearman_rho, wilcoxon_one_sided, Alternative, CorrelationMagnitude,
    EffectMagnitude, StatsError,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub n_common: usize,
    pub n_commit_only: usize,
    pub n_line_only: usize,
    pub common: f64,
    pub commit_only: f64,
    pub line_only: f64,
}

/// Shares of the developer union identified by both approaches, by commits
/// only, and by lines only. `None` when neither approach finds anyone.
pub fn set_overlap(profile: &FileOwnershipProfile) -> Option<Overlap> {
    let (mut both, mut commit_only, mut line_only) = (0usize, 0usize, 0usize);
    for dev in profile.per_developer.values() {
        match (dev.in_commit_set(), dev.in_line_set()) {
            (true, true) => both += 1,
            (true, false) => commit_only += 1,
            (false, true) => line_only += 1,
            (false, false) => {}
        }
    }
    let union = both + commit_only + line_only;
    if union == 0 {
        return None;
    }
    let u = union as f64;
    Some(Overlap {
        n_common: both,
        n_commit_only: commit_only,
        n_line_only: line_only,
        common: both as f64 / u,
        commit_only: commit_only as f64 / u,
        line_only: line_only as f64 / u,
    })
}

/// (own_commit, own_line) of developers identified by both approaches.
pub fn common_pairs(profile: &FileOwnershipProfile) -> Vec<(f64, f64)> {
    profile
        .per_developer
        .values()
        .filter_map(|d| Some((d.own_commit?, d.own_line?)))
        .collect()
}

/// Spearman correlation between the two ownership values of the common
/// developers. Absent with fewer than two, or when either side is constant.
pub fn ownership_correlation(profile: &FileOwnershipProfile) -> Option<f64> {
    let pairs = common_pairs(profile);
    if pairs.len() < 2 {
        return None;
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    match spearman_rho(&x, &y) {
        Ok(r) => Some(r.rho),
        Err(StatsError::ConstantSample) => {
            log::debug!("{}: tied ownership values, correlation undefined", profile.path);
            None
        }
        Err(e) => {
            log::debug!("{}: {e}", profile.path);
            None
        }
    }
}

/// Fraction of common developers whose expertise level agrees under both
/// approaches.
pub fn expertise_consistency(profile: &FileOwnershipProfile) -> Option<f64> {
    let levels: Vec<(ExpertiseLevel, ExpertiseLevel)> = profile
        .per_developer
        .values()
        .filter_map(|d| Some((d.level_commit?, d.level_line?)))
        .collect();
    if levels.is_empty() {
        return None;
    }
    let same = levels.iter().filter(|(c, l)| c == l).count();
    Some(same as f64 / levels.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRecord {
    pub path: String,
    pub n_common: usize,
    pub n_commit_only: usize,
    pub n_line_only: usize,
    pub common: f64,
    pub commit_only: f64,
    pub line_only: f64,
    pub rho: Option<f64>,
    pub expertise_consistency: Option<f64>,
}

pub fn divergence_record(profile: &FileOwnershipProfile) -> Option<DivergenceRecord> {
    let overlap = set_overlap(profile)?;
    Some(DivergenceRecord {
        path: profile.path.clone(),
        n_common: overlap.n_common,
        n_commit_only: overlap.n_commit_only,
        n_line_only: overlap.n_line_only,
        common: overlap.common,
        commit_only: overlap.commit_only,
        line_only: overlap.line_only,
        rho: ownership_correlation(profile),
        expertise_consistency: expertise_consistency(profile),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusiveComparison {
    pub release_name: String,
    pub commit_only_values: Vec<f64>,
    pub line_only_values: Vec<f64>,
    pub p_value: f64,
    pub delta: f64,
    pub magnitude: EffectMagnitude,
    pub major_fraction_commit_only: f64,
    pub major_fraction_line_only: f64,
}

/// Pools developers seen by exactly one approach across all files of a
/// release (one entry per file and developer) and tests whether the
/// commit-only group holds larger ownership than the line-only group.
///
/// Returns `Err` with a reason when either pool is empty.
pub fn exclusive_comparison(
    release_name: &str,
    profiles: &[FileOwnershipProfile],
) -> Result<ExclusiveComparison, String> {
    let mut commit_only = Vec::new();
    let mut line_only = Vec::new();
    let (mut major_commit, mut major_line) = (0usize, 0usize);
    for profile in profiles {
        for dev in profile.per_developer.values() {
            match (dev.own_commit, dev.own_line) {
                (Some(v), None) => {
                    commit_only.push(v);
                    if dev.level_commit == Some(ExpertiseLevel::Major) {
                        major_commit += 1;
                    }
                }
                (None, Some(v)) => {
                    line_only.push(v);
                    if dev.level_line == Some(ExpertiseLevel::Major) {
                        major_line += 1;
                    }
                }
                _ => {}
            }
        }
    }
    if commit_only.is_empty() || line_only.is_empty() {
        return Err(format!(
            "{release_name}: exclusive-developer pools too small (commit_only = {}, line_only = {})",
            commit_only.len(),
            line_only.len()
        ));
    }
    // Sorted pools make the result independent of file order.
    commit_only.sort_by(f64::total_cmp);
    line_only.sort_by(f64::total_cmp);
    let test = wilcoxon_one_sided(&commit_only, &line_only, Alternative::Greater)
        .map_err(|e| format!("{release_name}: {e}"))?;
    let effect = cliffs_delta(&commit_only, &line_only);
    Ok(ExclusiveComparison {
        release_name: release_name.to_string(),
        major_fraction_commit_only: major_commit as f64 / commit_only.len() as f64,
        major_fraction_line_only: major_line as f64 / line_only.len() as f64,
        commit_only_values: commit_only,
        line_only_values: line_only,
        p_value: test.p_value,
        delta: effect.delta,
        magnitude: effect.magnitude,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseSummary {
    pub release_name: String,
    pub n_files: usize,
    /// Files skipped because neither approach identified any developer.
    pub n_files_without_developers: usize,
    /// Files with fewer than two common developers (or tied values), which
    /// carry no correlation.
    pub n_files_without_rho: usize,
    pub median_common: Option<f64>,
    pub median_commit_only: Option<f64>,
    pub median_line_only: Option<f64>,
    pub median_rho: Option<f64>,
    pub median_rho_magnitude: Option<CorrelationMagnitude>,
    pub median_expertise_consistency: Option<f64>,
    pub exclusive_comparison: Option<ExclusiveComparison>,
    pub exclusive_comparison_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub records: Vec<DivergenceRecord>,
    pub summary: ReleaseSummary,
}

pub fn divergence_report(release_name: &str, profiles: &[FileOwnershipProfile]) -> DivergenceReport {
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for profile in profiles {
        match divergence_record(profile) {
            Some(r) => records.push(r),
            None => {
                log::debug!("{}: no developers under either approach, skipped", profile.path);
                skipped += 1;
            }
        }
    }
    records.sort_by(|a, b| a.path.cmp(&b.path));

    let column = |f: fn(&DivergenceRecord) -> Option<f64>| -> Vec<f64> {
        records.iter().filter_map(f).collect()
    };
    let rhos = column(|r| r.rho);
    let median_rho = median(&rhos);
    let (comparison, note) = match exclusive_comparison(release_name, profiles) {
        Ok(c) => (Some(c), None),
        Err(reason) => {
            log::info!("{reason}");
            (None, Some(reason))
        }
    };

    let summary = ReleaseSummary {
        release_name: release_name.to_string(),
        n_files: records.len(),
        n_files_without_developers: skipped,
        n_files_without_rho: records.len() - rhos.len(),
        median_common: median(&column(|r| Some(r.common))),
        median_commit_only: median(&column(|r| Some(r.commit_only))),
        median_line_only: median(&column(|r| Some(r.line_only))),
        median_rho,
        median_rho_magnitude: median_rho.map(CorrelationMagnitude::of),
        median_expertise_consistency: median(&column(|r| r.expertise_consistency)),
        exclusive_comparison: comparison,
        exclusive_comparison_note: note,
    };
    DivergenceReport { records, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn profile(commits: &[(&str, u64)], lines: &[(&str, u64)]) -> FileOwnershipProfile {
        let c: BTreeMap<String, u64> = commits.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let l: BTreeMap<String, u64> = lines.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        FileOwnershipProfile::from_counts("f.java", &c, &l, 0.05)
    }

    #[test]
    fn overlap_cases() {
        let same = set_overlap(&profile(&[("a", 1), ("b", 1)], &[("a", 1), ("b", 1)])).unwrap();
        assert_eq!((same.common, same.commit_only, same.line_only), (1.0, 0.0, 0.0));
        let s3 = set_overlap(&profile(&[("linda", 1)], &[("mary", 95), ("linda", 5)])).unwrap();
        assert_eq!((s3.common, s3.commit_only, s3.line_only), (0.5, 0.0, 0.5));
        let disjoint = set_overlap(&profile(&[("a", 1)], &[("b", 1)])).unwrap();
        assert_eq!((disjoint.common, disjoint.commit_only, disjoint.line_only), (0.0, 0.5, 0.5));
        assert!(set_overlap(&profile(&[], &[])).is_none());
    }

    #[test]
    fn correlation_cases() {
        // own values (0.2, 0.1) and (0.8, 0.9)
        let p = profile(&[("a", 1), ("b", 4)], &[("a", 1), ("b", 9)]);
        assert_eq!(ownership_correlation(&p), Some(1.0));
        let q = profile(&[("a", 1), ("b", 4)], &[("a", 9), ("b", 1)]);
        assert_eq!(ownership_correlation(&q), Some(-1.0));
        let single = profile(&[("a", 1)], &[("a", 3)]);
        assert_eq!(ownership_correlation(&single), None);
        let tied = profile(&[("a", 1), ("b", 1)], &[("a", 1), ("b", 3)]);
        assert_eq!(ownership_correlation(&tied), None);
    }

    #[test]
    fn consistency_cases() {
        let all = profile(&[("a", 1), ("b", 1), ("c", 1)], &[("a", 1), ("b", 1), ("c", 1)]);
        assert_eq!(expertise_consistency(&all), Some(1.0));
        // b: commit 1/2 major, line 1/100 minor
        let half = profile(&[("a", 1), ("b", 1)], &[("a", 99), ("b", 1)]);
        assert_eq!(expertise_consistency(&half), Some(0.5));
        assert_eq!(expertise_consistency(&profile(&[("a", 1)], &[("b", 1)])), None);
    }

    #[test]
    fn exclusive_pools() {
        // commit-only developers own everything by commits; line-only own 1/20.
        let profiles: Vec<_> = (0..3)
            .map(|_| profile(&[("c", 2)], &[("x", 1), ("y", 19)]))
            .collect();
        let cmp = exclusive_comparison("r", &profiles).unwrap();
        assert_eq!(cmp.commit_only_values, vec![1.0; 3]);
        assert_eq!(cmp.delta, 1.0);
        assert_eq!(cmp.magnitude, EffectMagnitude::Large);
        assert_eq!(cmp.major_fraction_commit_only, 1.0);
        assert_eq!(cmp.major_fraction_line_only, 0.5);
        assert!(cmp.p_value < 0.05);

        let same = vec![profile(&[("a", 1)], &[("b", 1)]), profile(&[("a", 1)], &[("b", 1)])];
        let cmp = exclusive_comparison("r", &same).unwrap();
        assert_eq!(cmp.delta, 0.0);
        assert_eq!(cmp.magnitude, EffectMagnitude::Negligible);

        assert!(exclusive_comparison("r", &[profile(&[("a", 1)], &[("a", 1)])]).is_err());
    }

    #[test]
    fn report_medians() {
        let unchanged = vec![profile(&[], &[("a", 1)]), profile(&[], &[("a", 2), ("b", 2)])];
        let report = divergence_report("r", &unchanged);
        assert_eq!(report.summary.median_line_only, Some(1.0));
        assert_eq!(report.summary.median_common, Some(0.0));
        assert!(report.summary.exclusive_comparison.is_none());
        assert!(report.summary.exclusive_comparison_note.is_some());

        let same = vec![profile(&[("a", 1)], &[("a", 1)])];
        assert_eq!(divergence_report("r", &same).summary.median_common, Some(1.0));
    }
}
