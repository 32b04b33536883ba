use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{average_ranks, check_finite, tie_sizes, StatsError};

/// Largest combined sample size handled by the exact null distribution.
pub const EXACT_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alternative {
    /// `x` tends to be larger than `y`.
    Greater,
    /// `x` tends to be smaller than `y`.
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSumTest {
    /// Mann-Whitney U of `x`: rank sum of `x` minus n_x(n_x+1)/2.
    pub u_statistic: f64,
    pub p_value: f64,
    pub exact: bool,
}

/// One-sided Wilcoxon rank-sum (Mann-Whitney) test.
///
/// Without ties and with at most [`EXACT_MAX_N`] observations in total the
/// p-value comes from the exact permutation distribution of the rank sum.
/// Otherwise a normal approximation with tie and continuity corrections is
/// used. If every observation is equal the p-value is 0.5.
pub fn wilcoxon_one_sided(
    x: &[f64],
    y: &[f64],
    alternative: Alternative,
) -> Result<RankSumTest, StatsError> {
    if x.is_empty() || y.is_empty() {
        return Err(StatsError::TooFewSamples {
            needed: 1,
            got: x.len().min(y.len()),
        });
    }
    check_finite(x)?;
    check_finite(y)?;

    let (n1, n2) = (x.len(), y.len());
    let n = n1 + n2;
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum_x: f64 = ranks[..n1].iter().sum();
    let u = rank_sum_x - (n1 * (n1 + 1)) as f64 / 2.0;
    let ties = tie_sizes(&pooled);
    let has_ties = ties.iter().any(|&t| t > 1);

    if n <= EXACT_MAX_N && !has_ties {
        // Without ties ranks are the integers 1..=n, so the rank sum is integral.
        let observed = rank_sum_x.round() as usize;
        let dist = rank_sum_counts(n, n1);
        let total: u64 = dist.iter().sum();
        let tail: u64 = match alternative {
            Alternative::Greater => dist[observed..].iter().sum(),
            Alternative::Less => dist[..=observed].iter().sum(),
        };
        return Ok(RankSumTest {
            u_statistic: u,
            p_value: tail as f64 / total as f64,
            exact: true,
        });
    }

    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let mean = n1f * n2f / 2.0;
    let tie_term: f64 = ties
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if variance <= 0.0 {
        return Ok(RankSumTest {
            u_statistic: u,
            p_value: 0.5,
            exact: false,
        });
    }
    let sd = variance.sqrt();
    let normal = Normal::standard();
    let p_value = match alternative {
        Alternative::Greater => normal.sf((u - mean - 0.5) / sd),
        Alternative::Less => normal.cdf((u - mean + 0.5) / sd),
    };
    Ok(RankSumTest {
        u_statistic: u,
        p_value: p_value.clamp(0.0, 1.0),
        exact: false,
    })
}

/// `counts[s]` = number of `k`-subsets of {1..=n} whose sum is `s`.
fn rank_sum_counts(n: usize, k: usize) -> Vec<u64> {
    let max_sum = n * (n + 1) / 2;
    // table[j][s]: j-subsets with sum s, using the ranks seen so far
    let mut table = vec![vec![0u64; max_sum + 1]; k + 1];
    table[0][0] = 1;
    for rank in 1..=n {
        for j in (1..=k.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                table[j][s] += table[j - 1][s - rank];
            }
        }
    }
    table.swap_remove(k)
}
