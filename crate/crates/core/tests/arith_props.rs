use loctab::arith::{gcd, lambda_sequence, primes_up_to, Factorization, ModelConstants, SieveTable};
use loctab::oracle::{divisors_trial, factor_trial, lambda_greedy_violations};
use proptest::prelude::*;

fn sieve() -> SieveTable {
    SieveTable::new(100_000).unwrap()
}

#[test]
fn factorization_reconstructs_every_n() {
    let s = sieve();
    for n in 1..=100_000u64 {
        let f = s.factorize(n).unwrap();
        let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(prod, n);
        assert_eq!(f.factors(), factor_trial(n).as_slice(), "n={n}");
    }
}

#[test]
fn divisors_sorted_and_gcd_closed() {
    let s = sieve();
    for n in 1..=100_000u64 {
        let d = s.factorize(n).unwrap().divisors();
        assert!(d.windows(2).all(|w| w[0] < w[1]), "n={n}");
        if n % 97 == 0 || n < 2000 {
            assert_eq!(d, divisors_trial(n));
            for &a in &d {
                for &b in &d {
                    assert!(d.binary_search(&gcd(a, b)).is_ok());
                }
            }
        }
    }
}

#[test]
fn sieve_primes_match_plain_sieve() {
    let s = sieve();
    let plain = primes_up_to(100_000);
    let from_table: Vec<u64> = s.primes().iter().map(|&p| p as u64).collect();
    assert_eq!(from_table, plain);
}

#[test]
fn squarefree_tau_is_power_of_k_plus_1() {
    let s = sieve();
    for a in 1..=10_000u64 {
        let f = s.factorize(a).unwrap();
        if !f.is_squarefree() {
            continue;
        }
        for k in 1..=4u32 {
            assert_eq!(f.tau_multi(k).unwrap(), (k as u128 + 1).pow(f.omega() as u32));
        }
    }
}

proptest! {
    #[test]
    fn tau_multi_is_multiplicative(a in 1u64..10_000, b in 1u64..10_000, k in 1u32..5) {
        prop_assume!(gcd(a, b) == 1);
        let fac = |n: u64| Factorization::from_prime_powers(factor_trial(n)).unwrap();
        let (fa, fb, fab) = (fac(a), fac(b), fac(a * b));
        prop_assert_eq!(fab.tau_multi(k).unwrap(), fa.tau_multi(k).unwrap() * fb.tau_multi(k).unwrap());
    }

    #[test]
    fn tau_multi_counts_divisor_tuples(n in 1u64..400, k in 1u32..4) {
        // number of ordered (d_1, ..., d_k) with d_1 ⋯ d_k | n
        fn count(rem: u64, left: u32) -> u128 {
            if left == 0 { return 1; }
            divisors_trial(rem).into_iter().map(|d| count(rem / d, left - 1)).sum()
        }
        let f = Factorization::from_prime_powers(factor_trial(n)).unwrap();
        prop_assert_eq!(f.tau_multi(k).unwrap(), count(n, k));
    }

    #[test]
    fn phi_matches_gcd_count(n in 1u64..2000) {
        let f = Factorization::from_prime_powers(factor_trial(n)).unwrap();
        let direct = (1..=n).filter(|&m| gcd(m, n) == 1).count() as u64;
        prop_assert_eq!(f.phi(), direct);
    }
}

#[test]
fn model_constant_ranges() {
    for k in 1..=30 {
        let c = ModelConstants::new(k).unwrap();
        assert!((c.rho.powi(k as i32) - (k as f64 + 1.0)).abs() < 1e-12 * (k as f64 + 1.0));
        assert!(c.p > 1.0 && c.p <= 2.0);
        assert!(c.lambda > 1.0);
    }
}

#[test]
fn lambda_blocks_are_greedy_maximal() {
    for k in 1..=3 {
        let seq = lambda_sequence(k, 1_000_000).unwrap();
        assert!(seq.len() >= 3, "k={k} produced {:?}", seq.lambdas);
        assert_eq!(lambda_greedy_violations(&seq), Vec::<String>::new(), "k={k}");
        for (j, &s) in seq.block_sums.iter().enumerate() {
            assert!(s <= seq.log_rho, "k={k} block {}", j + 1);
        }
    }
}

#[test]
fn lambda_drift_steps_shrink() {
    for k in 1..=3 {
        let seq = lambda_sequence(k, 10_000_000).unwrap();
        let steps: Vec<f64> = seq.empirical_drift.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(steps.windows(2).all(|w| w[1] < w[0]), "k={k} steps {steps:?}");
    }
}
