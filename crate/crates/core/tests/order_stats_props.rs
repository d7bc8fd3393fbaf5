use loctab::oracle::simplex_volume_steck;
use loctab::order_stats::{
    big, big_ratio, factorial_f64, lemma44_trend, lemma51_check, lemma53_check, mc_region_volume, q_r,
    simplex_volume_exact, RegionSpec, ThresholdVector,
};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-4i64..=16, 1i64..=12).prop_map(|(p, q)| big_ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn integration_matches_steck(mut a in proptest::collection::vec(rational(), 1..=6)) {
        a.sort();
        let t = ThresholdVector::new(a.clone()).unwrap();
        prop_assert_eq!(simplex_volume_exact(&t), simplex_volume_steck(&a));
    }

    #[test]
    fn q_is_a_probability(r in 1usize..=8, u in rational(), v in (1i64..=24, 1i64..=4)) {
        let v = big_ratio(v.0, v.1);
        let q = q_r(&u, &v, r).unwrap();
        prop_assert!(q >= big(0) && q <= big(1));
    }
}

#[test]
fn q_is_monotone_on_a_grid() {
    let grid: Vec<BigRational> = (1..=16).map(|i| big_ratio(i, 2)).collect();
    for r in 1..=8 {
        for (iu, u) in grid.iter().enumerate() {
            for (iv, v) in grid.iter().enumerate() {
                let q = q_r(u, v, r).unwrap();
                if let Some(u2) = grid.get(iu + 1) {
                    assert!(q_r(u2, v, r).unwrap() >= q, "r={r} u={u} v={v}");
                }
                if let Some(v2) = grid.get(iv + 1) {
                    assert!(q_r(u, v2, r).unwrap() >= q, "r={r} u={u} v={v}");
                }
            }
        }
    }
}

#[test]
fn sampling_a_full_region_is_exact() {
    for r in 1..=8 {
        let spec = RegionSpec::Simplex { thresholds: vec![0.0; r] };
        let e = mc_region_volume(&spec, 5000, 11).unwrap();
        assert_eq!(e.estimate, 1.0 / factorial_f64(r));
        assert_eq!(e.stderr, 0.0);
    }
}

#[test]
fn sampling_matches_exact_q() {
    let cases = [(1, 2), (1, 1), (2, 3), (3, 2), (1, 5)];
    for r in 1..=8usize {
        for (un, vd) in cases {
            let (u, v) = (big(un), big(vd as i64 + r as i64 / 2));
            let t = ThresholdVector::from_uv(&u, &v, r).unwrap();
            let exact = simplex_volume_exact(&t).to_f64().unwrap();
            let spec = RegionSpec::Simplex { thresholds: t.to_f64() };
            let e = mc_region_volume(&spec, 100_000, 1000 + r as u64).unwrap();
            assert!(e.within(exact, 4.0), "r={r} u={u} v={v}: exact {exact} vs {e:?}");
        }
    }
}

#[test]
fn lemma51_lower_bound_small() {
    let rep = lemma51_check(8).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert!(rep.shape.iter().all(|s| s.ratio.is_finite() && s.ratio > 0.0));
}

#[test]
fn u_and_t_regions_respect_the_trivial_bound() {
    let rep = lemma44_trend(2, 4, 20_000, 5, 50.0).unwrap();
    assert!(rep.rows.iter().all(|r| r.trivial_ok));
    let rep = lemma53_check(2, 3, 1, 20_000, 5, 1e9).unwrap();
    assert!(rep.rows.iter().all(|r| r.trivial_ok));
}
