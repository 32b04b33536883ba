mod common;

use codeown::stats::{
    cliffs_delta, npsk_rank, spearman_rho, wilcoxon_one_sided, Alternative, StatsError,
};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn distinct_sample(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut pool: Vec<i32> = (-50..50).collect();
    pool.shuffle(rng);
    pool[..n].iter().map(|&v| f64::from(v) / 4.0).collect()
}

#[test]
fn spearman_matches_oracles_on_random_instances() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..500 {
        let n = rng.gen_range(2..=8);
        // small integer range so ties are common
        let x: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..5))).collect();
        let y: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..5))).collect();
        match spearman_rho(&x, &y) {
            Ok(r) => {
                assert!((r.rho - spearman_oracle(&x, &y)).abs() < 1e-12, "{x:?} {y:?}");
            }
            Err(StatsError::ConstantSample) => {
                assert!(x.iter().all(|v| *v == x[0]) || y.iter().all(|v| *v == y[0]));
            }
            Err(e) => panic!("unexpected {e}"),
        }
        let dx = distinct_sample(&mut rng, n);
        let dy = distinct_sample(&mut rng, n);
        let r = spearman_rho(&dx, &dy).unwrap();
        assert!((r.rho - spearman_rank_difference(&dx, &dy)).abs() < 1e-12);
    }
}

#[test]
fn wilcoxon_exact_branch_matches_enumeration() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let n1 = rng.gen_range(1..=8);
        let n2 = rng.gen_range(1..=8);
        let pooled = distinct_sample(&mut rng, n1 + n2);
        let (x, y) = pooled.split_at(n1);
        for (alt, greater) in [(Alternative::Greater, true), (Alternative::Less, false)] {
            let r = wilcoxon_one_sided(x, y, alt).unwrap();
            assert!(r.exact);
            let oracle = wilcoxon_enumeration(x, y, greater);
            assert!((r.p_value - oracle).abs() < 1e-12, "{x:?} {y:?} {alt:?}");
        }
    }
}

#[test]
fn cliffs_matches_pair_counting() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(13);
    for _ in 0..500 {
        let x: Vec<f64> = (0..rng.gen_range(1..=8)).map(|_| f64::from(rng.gen_range(0..6))).collect();
        let y: Vec<f64> = (0..rng.gen_range(1..=8)).map(|_| f64::from(rng.gen_range(0..6))).collect();
        assert!((cliffs_delta(&x, &y).delta - cliffs_pairs(&x, &y)).abs() < 1e-12);
    }
}

#[test]
fn normal_approximation_tracks_exact_on_subsample() {
    // The 20-vs-20 shifted instance is too large for enumeration; a 7-vs-7
    // subsample with the same shift is checked against the exact oracle
    // instead, and the approximation must land in the same region.
    let x: Vec<f64> = (10..30).map(f64::from).collect();
    let y: Vec<f64> = x.iter().map(|v| v - 5.0).collect();
    let big = wilcoxon_one_sided(&x, &y, Alternative::Greater).unwrap();
    assert!(!big.exact);
    assert!(big.p_value < 0.01);

    let xs: Vec<f64> = (0..7).map(|i| 10.0 + 3.0 * f64::from(i)).collect();
    let ys: Vec<f64> = xs.iter().map(|v| v - 5.5).collect();
    let mut tied_x = xs.clone();
    tied_x[0] = ys[1]; // one tie forces the approximation branch
    let approx = wilcoxon_one_sided(&tied_x, &ys, Alternative::Greater).unwrap();
    assert!(!approx.exact);
    let oracle = wilcoxon_enumeration(&tied_x, &ys, true);
    assert!((approx.p_value - oracle).abs() < 0.05, "{} vs {}", approx.p_value, oracle);
}

proptest! {
    #[test]
    fn spearman_invariant_under_monotone_transform(
        pairs in proptest::collection::vec((-20i32..20, -20i32..20), 2..12)
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
        let y: Vec<f64> = pairs.iter().map(|p| f64::from(p.1)).collect();
        if let Ok(base) = spearman_rho(&x, &y) {
            let tx: Vec<f64> = x.iter().map(|v| (v / 7.0).exp()).collect();
            let ty: Vec<f64> = y.iter().map(|v| v * v * v + 3.0).collect();
            let t = spearman_rho(&tx, &ty).unwrap();
            prop_assert_eq!(t.rho, base.rho);
        }
    }

    #[test]
    fn cliffs_antisymmetric_and_bounded(
        x in proptest::collection::vec(-5i32..5, 1..10),
        y in proptest::collection::vec(-5i32..5, 1..10),
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let y: Vec<f64> = y.into_iter().map(f64::from).collect();
        let a = cliffs_delta(&x, &y).delta;
        let b = cliffs_delta(&y, &x).delta;
        prop_assert_eq!(a, -b);
        prop_assert!(a.abs() <= 1.0);
    }

    #[test]
    fn exact_tails_overlap(seed in 0u64..10_000, n1 in 1usize..8, n2 in 1usize..8) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let pooled = distinct_sample(&mut rng, n1 + n2);
        let (x, y) = pooled.split_at(n1);
        let g = wilcoxon_one_sided(x, y, Alternative::Greater).unwrap().p_value;
        let l = wilcoxon_one_sided(x, y, Alternative::Less).unwrap().p_value;
        prop_assert!(g + l >= 1.0 - 1e-12);
    }

    #[test]
    fn npsk_invariant_under_permutation_and_relabeling(
        groups in proptest::collection::vec(proptest::collection::vec(0i32..20, 1..6), 1..6),
        seed in 0u64..1000,
    ) {
        let named: Vec<(String, Vec<f64>)> = groups
            .iter()
            .enumerate()
            .map(|(i, g)| (format!("g{i}"), g.iter().map(|&v| f64::from(v)).collect()))
            .collect();
        let base = npsk_rank(named.clone());

        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut shuffled = named.clone();
        shuffled.shuffle(&mut rng);
        let relabeled: Vec<(String, Vec<f64>)> = shuffled
            .into_iter()
            .map(|(id, mut values)| {
                values.shuffle(&mut rng);
                (format!("z{id}"), values)
            })
            .collect();
        let other = npsk_rank(relabeled);
        for (id, rank) in base.iter() {
            prop_assert_eq!(other.rank_of(&format!("z{id}")), Some(rank));
        }
        // contiguous from 1
        let mut ranks = base.ranks.clone();
        ranks.dedup();
        prop_assert_eq!(ranks, (1..=base.ranks.iter().copied().max().unwrap_or(0)).collect::<Vec<_>>());
    }
}
