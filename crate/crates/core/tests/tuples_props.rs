use std::collections::BTreeSet;

use loctab::tuples::{
    enumerate_set_tuples, lemma36_check, lemma37_margin, m_b_bruteforce, m_b_formula, unique_union, Composition,
    SetTuple, DEFAULT_ENUMERATION_CAP,
};
use proptest::prelude::*;

const CAP: u128 = DEFAULT_ENUMERATION_CAP;

/// Every cutoff vector in `{0, ..., b}^k`.
fn cutoff_vectors(b: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn ranges() -> Vec<(usize, usize)> {
    let mut r: Vec<(usize, usize)> = (1..=5).map(|b| (b, 1)).collect();
    r.extend((1..=3).map(|b| (b, 2)));
    r
}

#[test]
fn formula_matches_bruteforce_exhaustively() {
    for (b, k) in ranges() {
        for i in cutoff_vectors(b, k) {
            for y in enumerate_set_tuples(b, k, CAP).unwrap() {
                let brute = m_b_bruteforce(&y, &i, CAP).unwrap() as u128;
                assert_eq!(m_b_formula(&y, &i).unwrap(), brute, "B={b} k={k} I={i:?} Y={:?}", y.sets());
            }
        }
    }
}

#[test]
fn formula_matches_bruteforce_beyond_required_range() {
    for (b, k) in [(4, 2), (3, 3), (2, 4)] {
        for i in cutoff_vectors(b, k) {
            for y in enumerate_set_tuples(b, k, CAP).unwrap().step_by(5) {
                assert_eq!(m_b_formula(&y, &i).unwrap(), m_b_bruteforce(&y, &i, CAP).unwrap() as u128);
            }
        }
    }
}

#[test]
fn full_cutoffs_and_lower_bound() {
    for (b, k) in ranges() {
        let full = vec![b; k];
        for y in enumerate_set_tuples(b, k, CAP).unwrap() {
            assert_eq!(m_b_formula(&y, &full).unwrap(), (k as u128 + 1).pow(b as u32));
            for i in cutoff_vectors(b, k) {
                assert!(m_b_formula(&y, &i).unwrap() >= 1);
            }
        }
    }
}

#[test]
fn lemma36_exhaustive() {
    for (b, k) in ranges() {
        for p in [1.25, 1.5, 2.0] {
            for i in cutoff_vectors(b, k) {
                let c = lemma36_check(b, k, p, &i, CAP).unwrap();
                assert!(c.holds(1e-9), "B={b} k={k} P={p} I={i:?}: {c:?}");
            }
            for edge in [vec![0; k], vec![b; k]] {
                let c = lemma36_check(b, k, p, &edge, CAP).unwrap();
                assert!((c.lhs - c.rhs).abs() <= 1e-9 * c.rhs, "equality at {edge:?}: {c:?}");
            }
        }
    }
}

#[test]
fn permuting_the_tuple_keeps_the_moment_sum() {
    let (b, k) = (3, 2);
    for p in [1.25, 1.5, 2.0] {
        for i in cutoff_vectors(b, k) {
            let sum = |m: &[usize]| -> f64 {
                enumerate_set_tuples(b, k, CAP)
                    .unwrap()
                    .map(|y| (m_b_formula(&y.permuted(m).unwrap(), &i).unwrap() as f64).powf(p - 1.0))
                    .sum()
            };
            let id = sum(&[1, 2]);
            let sw = sum(&[2, 1]);
            assert!((id - sw).abs() <= 1e-12 * id, "I={i:?} P={p}");
        }
    }
}

#[test]
fn lemma37_positive_on_grid() {
    for k in 2..=10 {
        let m = lemma37_margin(k).unwrap();
        assert!(m.min_value > 0.0, "k={k}: {m:?}");
        assert!(m.f0.abs() < 1e-9 && m.fk.abs() < 1e-9, "k={k}: {m:?}");
    }
}

fn disjoint_family(universe: usize, n: usize) -> impl Strategy<Value = Vec<BTreeSet<usize>>> {
    proptest::collection::vec(0..=n, universe)
        .prop_map(move |labels| (1..=n).map(|j| (0..universe).filter(|&x| labels[x] == j).collect()).collect())
}

proptest! {
    #[test]
    fn unique_union_of_differences(
        (ys, zs) in (1usize..5).prop_flat_map(|n| (disjoint_family(8, n), disjoint_family(8, n)))
    ) {
        let diffs: Vec<BTreeSet<usize>> = ys.iter().zip(&zs).map(|(y, z)| y.symmetric_difference(z).copied().collect()).collect();
        let uy: BTreeSet<usize> = ys.iter().flatten().copied().collect();
        let uz: BTreeSet<usize> = zs.iter().flatten().copied().collect();
        prop_assert_eq!(unique_union(&diffs).is_empty(), uy == uz);
    }

    #[test]
    fn e_b_brackets_i(parts in proptest::collection::vec(0u32..4, 1..6), frac in 0.0f64..=1.0) {
        let c = Composition::new(parts);
        let i = (frac * c.total() as f64).floor() as u32;
        let e = c.e_b(i).unwrap();
        let pre = c.prefix_sums();
        if i == 0 {
            prop_assert_eq!(e, 0);
        } else {
            prop_assert!(pre[e - 1] < i && i <= pre[e]);
        }
    }

    #[test]
    fn labels_roundtrip(labels in proptest::collection::vec(0u8..=3, 0..7)) {
        let t = SetTuple::from_labels(3, labels).unwrap();
        let back = SetTuple::from_sets(t.b(), &t.sets()).unwrap();
        prop_assert_eq!(back, t);
    }
}
