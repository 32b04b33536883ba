//! Brute-force oracles, kept independent of the library's implementations.
#![allow(dead_code)]

/// Rank of each value: 1 + (# strictly smaller) + (# other equal) / 2.
pub fn brute_ranks(v: &[f64]) -> Vec<f64> {
    (0..v.len())
        .map(|i| {
            let smaller = v.iter().filter(|&&x| x < v[i]).count() as f64;
            let equal_others = v.iter().filter(|&&x| x == v[i]).count() as f64 - 1.0;
            1.0 + smaller + equal_others / 2.0
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    pearson(&brute_ranks(x), &brute_ranks(y))
}

/// 1 - 6 sum d^2 / (n (n^2 - 1)); valid only without ties.
pub fn spearman_rank_difference(x: &[f64], y: &[f64]) -> f64 {
    let rx = brute_ranks(x);
    let ry = brute_ranks(y);
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Exact one-sided rank-sum p-value by enumerating every way of assigning
/// |x| of the pooled ranks to the first sample.
pub fn wilcoxon_enumeration(x: &[f64], y: &[f64], greater: bool) -> f64 {
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let ranks = brute_ranks(&pooled);
    let observed: f64 = ranks[..x.len()].iter().sum();
    let n = pooled.len();
    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != x.len() {
            continue;
        }
        total += 1;
        let sum: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        let extreme = if greater {
            sum >= observed - 1e-9
        } else {
            sum <= observed + 1e-9
        };
        if extreme {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

pub fn cliffs_pairs(x: &[f64], y: &[f64]) -> f64 {
    let mut score = 0i64;
    for a in x {
        for b in y {
            if a > b {
                score += 1;
            } else if a < b {
                score -= 1;
            }
        }
    }
    score as f64 / (x.len() * y.len()) as f64
}
