use std::f64::consts::LN_2;

use loctab::arith::{gcd, SieveTable};
use loctab::boxes::{box_set, holder_check, l_volume, s_partial, union_volume, DEFAULT_TUPLE_CAP};
use loctab::oracle::{l_volume_1d, union_volume_mc};
use proptest::prelude::*;

fn sieve() -> SieveTable {
    SieveTable::new(10_000).unwrap()
}

fn squarefree_upto(s: &SieveTable, n: u64) -> Vec<u64> {
    (1..=n).filter(|&a| s.factorize(a).unwrap().is_squarefree()).collect()
}

#[test]
fn one_dimensional_union_matches_interval_merge() {
    let s = sieve();
    for a in 1..=3000 {
        let fast = l_volume(&s.factorize(a).unwrap(), 1).unwrap();
        let slow = l_volume_1d(a);
        assert!((fast - slow).abs() <= 1e-12 * slow, "a={a}: {fast} vs {slow}");
    }
}

#[test]
fn union_lies_between_one_box_and_the_simple_bounds() {
    let s = sieve();
    for k in 1..=3usize {
        let ln2k = LN_2.powi(k as i32);
        for a in squarefree_upto(&s, 600) {
            let f = s.factorize(a).unwrap();
            let l = l_volume(&f, k).unwrap();
            let tau = f.tau_multi(k as u32).unwrap() as f64;
            let cap = (tau * ln2k).min(((a as f64).ln() + LN_2).powi(k as i32));
            assert!(l >= ln2k - 1e-12, "k={k} a={a}");
            assert!(l <= cap + 1e-9, "k={k} a={a}: {l} > {cap}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coprime_factor_bound(a in 1u64..60, b in 1u64..60, k in 1usize..=3) {
        let s = sieve();
        let (fa, fb) = (s.factorize(a).unwrap(), s.factorize(b).unwrap());
        prop_assume!(gcd(a, b) == 1 && fa.is_squarefree() && fb.is_squarefree());
        let fab = s.factorize(a * b).unwrap();
        let lhs = l_volume(&fab, k).unwrap();
        let rhs = fa.tau_multi(k as u32).unwrap() as f64 * l_volume(&fb, k).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "a={} b={} k={}: {} > {}", a, b, k, lhs, rhs);
    }

    #[test]
    fn two_dimensional_union_matches_sampling(a in 2u64..400, seed in any::<u64>()) {
        let s = sieve();
        let f = s.factorize(a).unwrap();
        let b = box_set(&f, 2, DEFAULT_TUPLE_CAP).unwrap();
        let exact = union_volume(&b).unwrap();
        let (est, se) = union_volume_mc(&b, 20_000, seed);
        prop_assert!((est - exact).abs() <= 4.0 * se + 1e-12, "a={}: {} vs {} ± {}", a, exact, est, se);
    }

    #[test]
    fn holder_inequality(
        set in proptest::collection::btree_set(1u64..300, 1..8),
        k in 1usize..=2,
        p in 1.01f64..=2.0,
    ) {
        let s = sieve();
        let set: Vec<u64> = set.into_iter().filter(|&a| s.factorize(a).unwrap().is_squarefree()).collect();
        prop_assume!(!set.is_empty());
        let h = holder_check(&set, k, p, &s).unwrap();
        prop_assert!(h.holds(1e-9), "{:?} k={} p={}: {:?}", set, k, p, h);
    }
}

#[test]
fn s_partial_is_monotone_in_both_cutoffs() {
    let s = sieve();
    let mut prev = 0.0;
    for t in [2, 3, 5, 7, 11, 13] {
        let sp = s_partial(1, t, 2000, &s).unwrap();
        assert!(sp.total >= prev);
        let split: f64 = sp.by_omega_k.values().sum();
        assert!((split - sp.total).abs() <= 1e-12 * sp.total);
        prev = sp.total;
    }
    let lo = s_partial(2, 13, 500, &s).unwrap().total;
    let hi = s_partial(2, 13, 5000, &s).unwrap().total;
    assert!(hi >= lo);
}
