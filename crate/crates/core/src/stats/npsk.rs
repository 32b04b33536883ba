//! Median-based Scott-Knott ranking with an effect-size gate.
//!
//! Groups are ordered by descending median. The ordered sequence is split
//! recursively at the boundary that maximizes the between-partition sum of
//! squares of the medians; a split is kept only when the two groups on
//! either side of the boundary differ by a non-negligible Cliff's delta.
//! Segments that cannot be split share one rank; ranks count up from 1.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{cliffs_delta, median, EffectMagnitude};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankAssignment {
    /// Sorted by rank, then id.
    pub group_ids: Vec<String>,
    /// 1 is the best (highest median) rank.
    pub ranks: Vec<u32>,
}

impl RankAssignment {
    pub fn rank_of(&self, id: &str) -> Option<u32> {
        self.group_ids
            .iter()
            .position(|g| g == id)
            .map(|i| self.ranks[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.group_ids
            .iter()
            .map(String::as_str)
            .zip(self.ranks.iter().copied())
    }
}

struct Group<'a> {
    id: &'a str,
    sorted: Vec<f64>,
    median: f64,
    mean: f64,
}

/// Ordering that depends only on the values, never on group ids, except to
/// separate groups with identical samples (which rank identically anyway).
fn compare(a: &Group, b: &Group) -> Ordering {
    b.median
        .total_cmp(&a.median)
        .then_with(|| b.mean.total_cmp(&a.mean))
        .then_with(|| {
            for (x, y) in a.sorted.iter().zip(&b.sorted) {
                match y.total_cmp(x) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            b.sorted.len().cmp(&a.sorted.len())
        })
        .then_with(|| a.id.cmp(b.id))
}

/// Ranks groups of observations. Empty groups are ignored.
pub fn npsk_rank<I, S>(groups: I) -> RankAssignment
where
    I: IntoIterator<Item = (S, Vec<f64>)>,
    S: AsRef<str>,
{
    let owned: Vec<(String, Vec<f64>)> = groups
        .into_iter()
        .map(|(id, values)| (id.as_ref().to_string(), values))
        .collect();
    let mut ordered: Vec<Group> = owned
        .iter()
        .filter(|(_, values)| !values.is_empty())
        .map(|(id, values)| {
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            Group {
                id: id.as_str(),
                median: median(&sorted).unwrap_or_default(),
                mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
                sorted,
            }
        })
        .collect();
    ordered.sort_by(compare);

    let mut cuts = Vec::new();
    split(&ordered, 0, ordered.len(), &mut cuts);
    cuts.sort_unstable();

    let mut ranked: Vec<(String, u32)> = Vec::with_capacity(ordered.len());
    let mut rank = 1u32;
    let mut next_cut = cuts.iter().peekable();
    for (i, group) in ordered.iter().enumerate() {
        while next_cut.peek().is_some_and(|&&c| c == i) {
            rank += 1;
            next_cut.next();
        }
        ranked.push((group.id.to_string(), rank));
    }
    ranked.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    RankAssignment {
        group_ids: ranked.iter().map(|(id, _)| id.clone()).collect(),
        ranks: ranked.iter().map(|(_, r)| *r).collect(),
    }
}

/// Records accepted cut positions (index of the first group of the right
/// partition) for `groups[lo..hi]`.
fn split(groups: &[Group], lo: usize, hi: usize, cuts: &mut Vec<usize>) {
    if hi - lo < 2 {
        return;
    }
    let medians: Vec<f64> = groups[lo..hi].iter().map(|g| g.median).collect();
    let n = medians.len() as f64;
    let overall = medians.iter().sum::<f64>() / n;

    let mut best: Option<(usize, f64)> = None;
    let mut left_sum = 0.0;
    let total: f64 = medians.iter().sum();
    for k in 1..medians.len() {
        left_sum += medians[k - 1];
        let (nl, nr) = (k as f64, n - k as f64);
        let ml = left_sum / nl;
        let mr = (total - left_sum) / nr;
        let between = nl * (ml - overall).powi(2) + nr * (mr - overall).powi(2);
        // strict comparison keeps the leftmost maximizer
        if best.is_none_or(|(_, b)| between > b) {
            best = Some((k, between));
        }
    }
    let Some((k, _)) = best else { return };
    let cut = lo + k;
    let effect = cliffs_delta(&groups[cut - 1].sorted, &groups[cut].sorted);
    if effect.magnitude == EffectMagnitude::Negligible {
        return;
    }
    cuts.push(cut);
    split(groups, lo, cut, cuts);
    split(groups, cut, hi, cuts);
}
