//! Parameterized property checks. `verify` runs them at default sizes and
//! the acceptance suite at the full sizes.
//!
//! Each check returns [`Findings`]: the failing instances (with their
//! inputs) plus informational notes. A `loctab::Error` means the check could
//! not run at all.

use std::collections::BTreeSet;
use std::f64::consts::LN_2;

use loctab::arith::{gcd, lambda_sequence, Factorization, SieveTable};
use loctab::boxes::{
    box_set, coprime_bound, holder_check, l_volume, prefix_bound, simple_bound, union_volume, DEFAULT_TUPLE_CAP,
};
use loctab::farey::{admissible_denominators, farey_count_characterized, farey_count_direct};
use loctab::localized::{h_count, has_localized, ratio, sandwich_check, tau_localized, CountMode, Window};
use loctab::oracle;
use loctab::order_stats::{
    big_ratio, factorial_f64, lemma310_check, lemma44_trend, lemma51_check, lemma53_check, mc_region_volume, q_r,
    simplex_volume_exact, RegionSpec, ThresholdVector,
};
use loctab::table::{table_count, Backing};
use loctab::tuples::{enumerate_set_tuples, lemma36_check, lemma37_margin, m_b_bruteforce, m_b_formula, unique_union};
use loctab::Result;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Findings {
    pub checked: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Findings {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, cond: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !cond {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Findings) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    fn merge_all(parts: Vec<Result<Findings>>) -> Result<Findings> {
        let mut out = Findings::default();
        for p in parts {
            out.merge(p?);
        }
        Ok(out)
    }
}

pub fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(salt);
    r
}

/// Window with bounds `p/q`, `q <= 4`, up to `max_bound`.
pub fn random_window(r: &mut ChaCha8Rng, k: usize, max_bound: i128) -> Window {
    let mut bound = || ratio(r.random_range(1..=4 * max_bound), r.random_range(1..=4));
    let (mut y, mut z) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for _ in 0..k {
        let (a, b) = (bound(), bound());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        y.push(lo);
        z.push(hi);
    }
    Window::new(y, z).expect("positive bounds")
}

fn show(w: &Window) -> String {
    let f = |v: &[loctab::Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("y=({}) z=({})", f(w.y()), f(w.z()))
}

// ---------------------------------------------------------------- arith

pub fn factorization(sieve: &SieveTable, n_max: u64) -> Result<Findings> {
    sieve.ensure_covers(n_max)?;
    let parts: Vec<Result<Findings>> = (1..=n_max)
        .collect::<Vec<_>>()
        .par_chunks(4096)
        .map(|chunk| {
            let mut f = Findings::default();
            for &n in chunk {
                let fac = sieve.factorize(n)?;
                f.expect(fac.factors() == oracle::factor_trial(n).as_slice(), || format!("factorize({n})"));
                let d = fac.divisors();
                f.expect(d == oracle::divisors_trial(n), || format!("divisors({n})"));
                if n <= 3000 {
                    let closed = d.iter().all(|&a| d.iter().all(|&b| d.binary_search(&gcd(a, b)).is_ok()));
                    f.expect(closed, || format!("divisors({n}) not gcd-closed"));
                }
            }
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

pub fn tau_multiplicative(sieve: &SieveTable, pairs: usize, bound: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(bound * bound)?;
    let mut r = rng(seed, 1);
    let mut f = Findings::default();
    let mut done = 0;
    while done < pairs {
        let (a, b) = (r.random_range(1..=bound), r.random_range(1..=bound));
        if gcd(a, b) != 1 {
            continue;
        }
        done += 1;
        let k = r.random_range(1..=4u32);
        let (fa, fb, fab) = (sieve.factorize(a)?, sieve.factorize(b)?, sieve.factorize(a * b)?);
        f.expect(fab.tau_multi(k)? == fa.tau_multi(k)? * fb.tau_multi(k)?, || format!("a={a} b={b} k={k}"));
    }
    Ok(f)
}

pub fn tau_squarefree(sieve: &SieveTable, a_max: u64, k_max: u32) -> Result<Findings> {
    sieve.ensure_covers(a_max)?;
    let mut f = Findings::default();
    for a in 1..=a_max {
        let fa = sieve.factorize(a)?;
        if !fa.is_squarefree() {
            continue;
        }
        for k in 1..=k_max {
            let want = (k as u128 + 1).pow(fa.omega() as u32);
            f.expect(fa.tau_multi(k)? == want, || format!("a={a} k={k}"));
        }
    }
    Ok(f)
}

pub fn lambda_greedy(prime_limit: u64, ks: &[u32]) -> Result<Findings> {
    let mut f = Findings::default();
    for &k in ks {
        let seq = lambda_sequence(k, prime_limit)?;
        let bad = oracle::lambda_greedy_violations(&seq);
        f.checked += seq.len() as u64;
        f.failures.extend(bad.into_iter().map(|b| format!("k={k}: {b}")));
        f.notes.push(format!("k={k} lambdas={:?}", seq.lambdas));
    }
    Ok(f)
}

pub fn lambda_drift(prime_limit: u64, ks: &[u32]) -> Result<Findings> {
    let mut f = Findings::default();
    for &k in ks {
        let seq = lambda_sequence(k, prime_limit)?;
        let d = &seq.empirical_drift;
        let steps: Vec<f64> = d.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for (j, w) in steps.windows(2).enumerate() {
            f.expect(w[1] < w[0], || format!("k={k}: drift step {} = {} not below {}", j + 2, w[1], w[0]));
        }
        f.notes.push(format!("k={k} drift={}", d.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ")));
    }
    Ok(f)
}

// ---------------------------------------------------------------- localized

pub fn tau_oracle(sieve: &SieveTable, ks: &[usize], windows: usize, n_max: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(n_max)?;
    let jobs: Vec<(usize, usize)> = ks.iter().flat_map(|&k| (0..windows).map(move |i| (k, i))).collect();
    let parts: Vec<Result<Findings>> = jobs
        .par_iter()
        .map(|&(k, i)| {
            let w = random_window(&mut rng(seed, 100 + (k * 10_000 + i) as u64), k, 40);
            let mut f = Findings::default();
            for n in 1..=n_max {
                let fast = tau_localized(n, &w, sieve)?;
                let slow = oracle::tau_localized_bruteforce(n, &w);
                f.expect(fast == slow, || format!("n={n} k={k} {}: {fast} vs {slow}", show(&w)));
                let has = has_localized(n, &w, sieve)?;
                f.expect(has == (fast >= 1), || format!("has_localized n={n} {}", show(&w)));
            }
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

pub fn h_count_oracle(sieve: &SieveTable, ks: &[usize], windows: usize, x_max: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(x_max)?;
    let jobs: Vec<(usize, usize)> = ks.iter().flat_map(|&k| (0..windows).map(move |i| (k, i))).collect();
    let parts: Vec<Result<Findings>> = jobs
        .par_iter()
        .map(|&(k, i)| {
            let mut r = rng(seed, 200 + (k * 10_000 + i) as u64);
            let w = random_window(&mut r, k, 30);
            let x = r.random_range(1..=x_max);
            let xr = ratio(x as i128, 1);
            let mut f = Findings::default();
            let all = h_count(&xr, &w, CountMode::All, sieve)?.count().unwrap_or(0);
            let sq = h_count(&xr, &w, CountMode::Squarefree, sieve)?.count().unwrap_or(0);
            f.expect(all == oracle::h_count_marking(x, &w, false), || format!("H x={x} {}", show(&w)));
            f.expect(sq == oracle::h_count_marking(x, &w, true), || format!("H_* x={x} {}", show(&w)));
            f.expect(sq <= all, || format!("H_* > H at x={x} {}", show(&w)));
            let dy = Window::dyadic(w.y().to_vec())?;
            let h = h_count(&xr, &dy, CountMode::All, sieve)?.as_f64();
            let tilde = h_count(&xr, &dy, CountMode::PhiWeightedHalfDyadic, sieve)?.as_f64();
            f.expect(tilde <= h, || format!("H~ > H at x={x} {}", show(&dy)));
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

pub fn window_monotone(sieve: &SieveTable, windows: usize, x_max: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(x_max)?;
    let parts: Vec<Result<Findings>> = (0..windows)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(seed, 300 + i as u64);
            let k = r.random_range(1..=3usize);
            let w = random_window(&mut r, k, 30);
            let c = r.random_range(0..k);
            let mut y = w.y().to_vec();
            let mut z = w.z().to_vec();
            y[c] = (y[c] - ratio(r.random_range(0..8), 2)).max(ratio(1, 4));
            z[c] += ratio(r.random_range(0..8), 3);
            let big = Window::new(y, z)?;
            let mut f = Findings::default();
            for n in (1..=x_max).step_by(3) {
                let (a, b) = (tau_localized(n, &w, sieve)?, tau_localized(n, &big, sieve)?);
                f.expect(b >= a, || format!("n={n} {} -> {}", show(&w), show(&big)));
            }
            let xr = ratio(x_max as i128, 1);
            let (a, b) = (
                h_count(&xr, &w, CountMode::All, sieve)?.as_f64(),
                h_count(&xr, &big, CountMode::All, sieve)?.as_f64(),
            );
            f.expect(b >= a, || format!("H x={x_max} {} -> {}", show(&w), show(&big)));
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

pub fn window_permutation(sieve: &SieveTable, windows: usize, n_max: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(n_max)?;
    let parts: Vec<Result<Findings>> = (0..windows)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(seed, 400 + i as u64);
            let w = random_window(&mut r, 3, 30);
            let mut perm = vec![0, 1, 2];
            perm.shuffle(&mut r);
            let p = w.permuted(&perm);
            let mut f = Findings::default();
            for n in (1..=n_max).step_by(5) {
                f.expect(tau_localized(n, &w, sieve)? == tau_localized(n, &p, sieve)?, || {
                    format!("n={n} {} perm={perm:?}", show(&w))
                });
            }
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

pub fn sandwich(sieve: &SieveTable, cases: &[(usize, u64)]) -> Result<Findings> {
    let mut f = Findings::default();
    for &(k, n_max) in cases {
        for n in 1..=n_max {
            let s = sandwich_check(k, n, sieve)?;
            f.expect(s.holds(), || format!("k={k} N={n}: lower={} A={} upper={}", s.lower, s.a, s.upper_sum));
        }
    }
    Ok(f)
}

// ---------------------------------------------------------------- boxes

fn squarefree_factorizations(sieve: &SieveTable, a_max: u64) -> Result<Vec<Factorization>> {
    sieve.ensure_covers(a_max)?;
    let mut out = Vec::new();
    for a in 1..=a_max {
        let f = sieve.factorize(a)?;
        if f.is_squarefree() {
            out.push(f);
        }
    }
    Ok(out)
}

/// `(log 2)^k <= L <= min{τ (log 2)^k, (log a + log 2)^k}`.
pub fn lemma31_a(sieve: &SieveTable, a_max: u64, ks: &[usize]) -> Result<Findings> {
    let fs = squarefree_factorizations(sieve, a_max)?;
    let parts: Vec<Result<Findings>> = fs
        .par_iter()
        .map(|fa| {
            let mut f = Findings::default();
            for &k in ks {
                let l = l_volume(fa, k)?;
                let cap = simple_bound(fa, k)?;
                f.expect(l <= cap + 1e-9, || format!("a={} k={k}: L={l} > {cap}", fa.n()));
                f.expect(l >= LN_2.powi(k as i32) - 1e-9, || format!("a={} k={k}: L={l} below one box", fa.n()));
            }
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

/// `L(ab) <= τ(a) L(b)` on random coprime squarefree pairs.
pub fn lemma31_b(sieve: &SieveTable, pairs: usize, ab_max: u64, ks: &[usize], seed: u64) -> Result<Findings> {
    sieve.ensure_covers(ab_max)?;
    let mut r = rng(seed, 500);
    let mut chosen = Vec::with_capacity(pairs);
    while chosen.len() < pairs {
        let a = r.random_range(1..=ab_max / 2);
        let b = r.random_range(1..=ab_max / a);
        if gcd(a, b) == 1 && sieve.factorize(a * b)?.is_squarefree() {
            chosen.push((a, b));
        }
    }
    let parts: Vec<Result<Findings>> = chosen
        .par_iter()
        .map(|&(a, b)| {
            let mut f = Findings::default();
            let (fa, fb, fab) = (sieve.factorize(a)?, sieve.factorize(b)?, sieve.factorize(a * b)?);
            for &k in ks {
                let (lhs, rhs) = (l_volume(&fab, k)?, coprime_bound(&fa, &fb, k)?);
                f.expect(lhs <= rhs + 1e-9, || format!("a={a} b={b} k={k}: {lhs} > {rhs}"));
            }
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

fn permutations(v: &[u64]) -> Vec<Vec<u64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// The prefix bound for every ordering of the prime factors.
pub fn lemma31_c(sieve: &SieveTable, a_max: u64, m_max: usize, ks: &[usize]) -> Result<Findings> {
    let fs: Vec<Factorization> =
        squarefree_factorizations(sieve, a_max)?.into_iter().filter(|f| (1..=m_max).contains(&f.omega())).collect();
    let parts: Vec<Result<Findings>> = fs
        .par_iter()
        .map(|fa| {
            let mut f = Findings::default();
            let primes: Vec<u64> = fa.primes().collect();
            for &k in ks {
                let l = l_volume(fa, k)?;
                for order in permutations(&primes) {
                    let b = prefix_bound(&order, k);
                    f.expect(l <= b + 1e-9, || format!("primes={order:?} k={k}: L={l} > {b}"));
                }
            }
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

pub fn union_vs_merge(sieve: &SieveTable, a_max: u64) -> Result<Findings> {
    sieve.ensure_covers(a_max)?;
    let mut f = Findings::default();
    for a in 1..=a_max {
        let fast = l_volume(&sieve.factorize(a)?, 1)?;
        let slow = oracle::l_volume_1d(a);
        f.expect((fast - slow).abs() <= 1e-12 * slow, || format!("a={a}: {fast} vs {slow}"));
    }
    Ok(f)
}

pub fn union_vs_sampling(sieve: &SieveTable, count: usize, a_max: u64, samples: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(a_max)?;
    let mut r = rng(seed, 600);
    let picks: Vec<u64> = (0..count).map(|_| r.random_range(2..=a_max)).collect();
    let parts: Vec<Result<Findings>> = picks
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            let b = box_set(&sieve.factorize(a)?, 2, DEFAULT_TUPLE_CAP)?;
            let exact = union_volume(&b)?;
            let (est, se) = oracle::union_volume_mc(&b, samples, seed.wrapping_add(i as u64));
            let mut f = Findings::default();
            f.expect((est - exact).abs() <= 4.0 * se + 1e-12, || {
                format!("a={a}: exact {exact} vs {est} ± {se} ({samples} samples)")
            });
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

/// Random squarefree sets with `P ∈ (1, 2]`, plus the `{1,2,3,6}` instance.
pub fn holder(sieve: &SieveTable, sets: usize, a_max: u64, seed: u64) -> Result<Findings> {
    sieve.ensure_covers(a_max)?;
    let mut r = rng(seed, 700);
    let mut cases: Vec<(Vec<u64>, usize, f64)> = vec![(vec![1, 2, 3, 6], 1, 2.0)];
    while cases.len() < sets + 1 {
        let size = r.random_range(1..=8);
        let mut set = BTreeSet::new();
        while set.len() < size {
            let a = r.random_range(1..=a_max);
            if sieve.factorize(a)?.is_squarefree() {
                set.insert(a);
            }
        }
        let k = r.random_range(1..=2usize);
        let p = 1.0 + r.random_range(1..=1000) as f64 / 1000.0;
        cases.push((set.into_iter().collect(), k, p));
    }
    let parts: Vec<Result<Findings>> = cases
        .par_iter()
        .map(|(set, k, p)| {
            let h = holder_check(set, *k, *p, sieve)?;
            let mut f = Findings::default();
            f.expect(h.holds(1e-9), || format!("A={set:?} k={k} P={p}: lhs={} rhs={}", h.lhs, h.rhs));
            Ok(f)
        })
        .collect();
    let mut f = Findings::merge_all(parts)?;
    let w = holder_check(&[1, 2, 3, 6], 1, 2.0, sieve)?;
    f.notes.push(format!("A={{1,2,3,6}} k=1 P=2: lhs={} rhs={}", w.lhs, w.rhs));
    f.expect((w.lhs - 10.0 / 3.0).abs() < 1e-12, || format!("worked instance lhs {}", w.lhs));
    Ok(f)
}

// ---------------------------------------------------------------- table / farey

pub fn table_backings(cases: &[(usize, u64)], chunk_len: usize) -> Result<Findings> {
    let mut f = Findings::default();
    for &(k, n) in cases {
        let a = table_count(k, n, Backing::Bitset)?;
        let b = table_count(k, n, Backing::SortedChunks { chunk_len })?;
        f.expect(a == b, || format!("A_{}({n}): bitset {a} vs sorted {b}", k + 1));
        f.notes.push(format!("A_{}({n}) = {a}", k + 1));
    }
    Ok(f)
}

pub fn table_oracle(cases: &[(usize, u64)]) -> Result<Findings> {
    let mut f = Findings::default();
    for &(k, n_max) in cases {
        let mut prev = 0u64;
        for n in 1..=n_max {
            let a = table_count(k, n, Backing::default())?;
            f.expect(a == oracle::table_count_hashset(k + 1, n), || format!("A_{}({n}) = {a}", k + 1));
            let growth = (n.pow(k as u32)) * (k as u64 + 1);
            f.expect(a >= prev && a <= prev + growth, || format!("A_{}({n}) growth from {prev} to {a}", k + 1));
            prev = a;
        }
    }
    Ok(f)
}

pub fn farey_identity(cases: &[(usize, u64)], cap: u128) -> Result<Findings> {
    let jobs: Vec<(usize, u64)> = cases.iter().flat_map(|&(kp1, rm)| (1..=rm).map(move |r| (kp1, r))).collect();
    let parts: Vec<Result<Findings>> = jobs
        .par_iter()
        .map(|&(kp1, r)| {
            let (d, c) = (farey_count_direct(kp1, r, cap)?, farey_count_characterized(kp1, r, cap)?);
            let mut f = Findings::default();
            f.expect(d == c, || format!("kp1={kp1} R={r}: direct {d} vs characterized {c}"));
            Ok(f)
        })
        .collect();
    let mut f = Findings::merge_all(parts)?;
    let spot = farey_count_direct(2, 3, cap)?;
    f.expect(spot == 6, || format!("|F_3(2)| = {spot}"));
    Ok(f)
}

pub fn farey_inequality(kp1s: &[usize], r_max: u64, cap: u128) -> Result<Findings> {
    let jobs: Vec<(usize, u64)> = kp1s.iter().flat_map(|&kp1| (1..=r_max).map(move |r| (kp1, r))).collect();
    let parts: Vec<Result<Findings>> = jobs
        .par_iter()
        .map(|&(kp1, r)| {
            let d = farey_count_direct(kp1, r, cap)?;
            let phi: u64 = admissible_denominators(kp1, r, cap)?.values().sum();
            let a = table_count(kp1 - 1, r, Backing::default())?;
            let top = (r as u128).pow(kp1 as u32) * a as u128;
            let mut f = Findings::default();
            f.expect(d <= phi && phi as u128 <= top, || format!("kp1={kp1} R={r}: {d} <= {phi} <= {top}"));
            Ok(f)
        })
        .collect();
    Findings::merge_all(parts)
}

// ---------------------------------------------------------------- tuples

fn cutoff_vectors(b: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
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

/// `(B, k)` pairs `(1..=b1, 1)` and `(1..=b2, 2)`.
pub fn tuple_ranges(b1: usize, b2: usize) -> Vec<(usize, usize)> {
    (1..=b1).map(|b| (b, 1)).chain((1..=b2).map(|b| (b, 2))).collect()
}

pub fn mb_identity(ranges: &[(usize, usize)], cap: u128) -> Result<Findings> {
    let mut f = Findings::default();
    for &(b, k) in ranges {
        for i in cutoff_vectors(b, k) {
            for y in enumerate_set_tuples(b, k, cap)? {
                let (fast, slow) = (m_b_formula(&y, &i)?, m_b_bruteforce(&y, &i, cap)? as u128);
                f.expect(fast == slow, || format!("B={b} k={k} I={i:?} Y={:?}: {fast} vs {slow}", y.sets()));
                f.expect(fast >= 1, || format!("B={b} k={k} I={i:?}: M_B = 0"));
            }
        }
        for y in enumerate_set_tuples(b, k, cap)? {
            let full = m_b_formula(&y, &vec![b; k])?;
            f.expect(full == (k as u128 + 1).pow(b as u32), || format!("B={b} k={k} full cutoffs: {full}"));
        }
    }
    Ok(f)
}

pub fn lemma36(ranges: &[(usize, usize)], ps: &[f64], cap: u128) -> Result<Findings> {
    let mut f = Findings::default();
    for &(b, k) in ranges {
        for &p in ps {
            for i in cutoff_vectors(b, k) {
                let c = lemma36_check(b, k, p, &i, cap)?;
                f.expect(c.holds(1e-9), || format!("B={b} k={k} P={p} I={i:?}: lhs={} rhs={}", c.lhs, c.rhs));
            }
            for edge in [vec![0; k], vec![b; k]] {
                let c = lemma36_check(b, k, p, &edge, cap)?;
                f.expect((c.lhs - c.rhs).abs() <= 1e-9 * c.rhs, || {
                    format!("B={b} k={k} P={p} I={edge:?}: expected equality, lhs={} rhs={}", c.lhs, c.rhs)
                });
            }
        }
    }
    Ok(f)
}

/// Outside the proven range of `P`: records whether the bound holds, never fails.
pub fn lemma36_probe(ranges: &[(usize, usize)], p: f64, cap: u128) -> Result<Findings> {
    let (mut total, mut held) = (0u64, 0u64);
    let mut worst = 0.0f64;
    for &(b, k) in ranges {
        for i in cutoff_vectors(b, k) {
            let c = lemma36_check(b, k, p, &i, cap)?;
            total += 1;
            held += c.holds(1e-9) as u64;
            worst = worst.max(c.lhs / c.rhs);
        }
    }
    Ok(Findings {
        checked: 0,
        failures: vec![],
        notes: vec![format!("P={p}: bound held on {held} of {total} cutoff vectors, max lhs/rhs {worst:.6}")],
    })
}

pub fn lemma37(k_max: u32) -> Result<Findings> {
    let mut f = Findings::default();
    for k in 2..=k_max {
        let m = lemma37_margin(k)?;
        f.expect(m.min_value > 0.0, || format!("k={k}: min f = {} at {}", m.min_value, m.argmin));
        f.expect(m.f0.abs() < 1e-9 && m.fk.abs() < 1e-9, || format!("k={k}: f(0)={} f(k)={}", m.f0, m.fk));
        f.notes
            .push(format!("k={k} min={:.9} argmin={:.4} f(0)={:.1e} f(k)={:.1e}", m.min_value, m.argmin, m.f0, m.fk));
    }
    Ok(f)
}

pub fn tuple_permutation(b: usize, ps: &[f64], cap: u128) -> Result<Findings> {
    let mut f = Findings::default();
    for &p in ps {
        for i in cutoff_vectors(b, 2) {
            let mut sums = Vec::new();
            for m in [[1usize, 2], [2, 1]] {
                let mut s = 0.0;
                for y in enumerate_set_tuples(b, 2, cap)? {
                    s += (m_b_formula(&y.permuted(&m)?, &i)? as f64).powf(p - 1.0);
                }
                sums.push(s);
            }
            f.expect((sums[0] - sums[1]).abs() <= 1e-12 * sums[0], || format!("B={b} P={p} I={i:?}: {sums:?}"));
        }
    }
    Ok(f)
}

pub fn remark31(trials: usize, seed: u64) -> Result<Findings> {
    let mut r = rng(seed, 800);
    let mut f = Findings::default();
    for _ in 0..trials {
        let n = r.random_range(1..=4usize);
        let mut family = || -> Vec<BTreeSet<usize>> {
            let labels: Vec<usize> = (0..8).map(|_| r.random_range(0..=n)).collect();
            (1..=n).map(|j| (0..8).filter(|&x| labels[x] == j).collect()).collect()
        };
        let (ys, zs) = (family(), family());
        let diffs: Vec<BTreeSet<usize>> =
            ys.iter().zip(&zs).map(|(y, z)| y.symmetric_difference(z).copied().collect()).collect();
        let uy: BTreeSet<usize> = ys.iter().flatten().copied().collect();
        let uz: BTreeSet<usize> = zs.iter().flatten().copied().collect();
        f.expect(unique_union(&diffs).is_empty() == (uy == uz), || format!("Y={ys:?} Z={zs:?}"));
    }
    Ok(f)
}

// ---------------------------------------------------------------- order statistics

pub fn steck(trials: usize, r_max: usize, seed: u64) -> Result<Findings> {
    let mut r = rng(seed, 900);
    let mut f = Findings::default();
    for _ in 0..trials {
        let len = r.random_range(1..=r_max);
        let mut a: Vec<BigRational> =
            (0..len).map(|_| big_ratio(r.random_range(-4..=16), r.random_range(1..=12))).collect();
        a.sort();
        let t = ThresholdVector::new(a.clone())?;
        let (x, y) = (simplex_volume_exact(&t), oracle::simplex_volume_steck(&a));
        f.expect(x == y, || format!("a={a:?}: {x} vs {y}"));
    }
    Ok(f)
}

pub fn q_monotone(r_max: usize) -> Result<Findings> {
    let grid: Vec<BigRational> = (1..=12).map(|i| big_ratio(i, 2)).collect();
    let mut f = Findings::default();
    for r in 1..=r_max {
        let table: Vec<Vec<BigRational>> = grid
            .iter()
            .map(|u| grid.iter().map(|v| q_r(u, v, r)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for iu in 0..grid.len() {
            for iv in 0..grid.len() {
                if iu + 1 < grid.len() {
                    f.expect(table[iu + 1][iv] >= table[iu][iv], || format!("r={r} u={} v={}", grid[iu], grid[iv]));
                }
                if iv + 1 < grid.len() {
                    f.expect(table[iu][iv + 1] >= table[iu][iv], || format!("r={r} u={} v={}", grid[iu], grid[iv]));
                }
            }
        }
    }
    let q = q_r(&big_ratio(1, 1), &big_ratio(2, 1), 2)?;
    f.expect(q == big_ratio(3, 4), || format!("Q_2(1,2) = {q}"));
    Ok(f)
}

/// Sampled volumes of threshold simplices against the exact value, and of
/// the full simplex (which must come out as exactly `1/r!`).
pub fn mc_vs_exact(r_max: usize, samples: u64, seed: u64) -> Result<Findings> {
    let mut f = Findings::default();
    for r in 1..=r_max {
        let full = mc_region_volume(&RegionSpec::Simplex { thresholds: vec![0.0; r] }, samples.min(10_000), seed)?;
        f.expect(full.estimate == 1.0 / factorial_f64(r) && full.stderr == 0.0, || {
            format!("full simplex r={r}: {full:?}")
        });
        for (un, ud) in [(1, 2), (1, 1), (2, 1)] {
            for vm in [1, 2] {
                let u = big_ratio(un, ud);
                let v = big_ratio((vm * r) as i64, 2).max(big_ratio(1, 1));
                let t = ThresholdVector::from_uv(&u, &v, r)?;
                let exact = simplex_volume_exact(&t).to_f64().unwrap_or(f64::NAN);
                let est = mc_region_volume(
                    &RegionSpec::Simplex { thresholds: t.to_f64() },
                    samples,
                    seed.wrapping_add(r as u64),
                )?;
                f.expect(est.within(exact, 4.0), || {
                    format!("r={r} u={u} v={v}: exact {exact} vs {} ± {}", est.estimate, est.stderr)
                });
            }
        }
    }
    Ok(f)
}

pub fn lemma51(r_max: usize) -> Result<Findings> {
    let rep = lemma51_check(r_max)?;
    let mut f = Findings::default();
    for row in &rep.rows {
        f.expect(row.holds, || format!("r={} u={}: Q={} < {}", row.r, row.u, row.q, row.bound));
    }
    let worst = rep.shape.iter().map(|s| s.ratio).fold(0.0, f64::max);
    f.notes.push(format!("max Q_r(u,v) r/((u+1)(w+1)) over the grid = {worst:.6}"));
    Ok(f)
}

pub fn lemma310(b_max: usize, samples: u64, seed: u64, ks: &[u32], n: f64, floor: f64) -> Result<Findings> {
    let mut f = Findings::default();
    for &k in ks {
        let rep = lemma310_check(b_max, samples, seed, k, n, floor)?;
        for row in &rep.rows {
            f.expect(row.holds, || {
                format!(
                    "k={k} N={n} B={}: Vol*(B+1)! = {:.6} ± {:.6} below floor {floor}",
                    row.b, row.scaled, row.scaled_stderr
                )
            });
            f.notes.push(format!(
                "k={k} N={n} lambda={:.6} B={} Vol*(B+1)!={:.6} ± {:.6}",
                rep.lambda, row.b, row.scaled, row.scaled_stderr
            ));
        }
    }
    Ok(f)
}

pub fn lemma44(k: u32, v_max: usize, samples: u64, seed: u64, ceiling: f64) -> Result<Findings> {
    let rep = lemma44_trend(k, v_max, samples, seed, ceiling)?;
    let mut f = Findings::default();
    for row in &rep.rows {
        f.expect(row.trivial_ok, || format!("U_{}(v={}) = {} exceeds 1/r!", row.r, row.v, row.estimate.estimate));
        f.expect(row.ratio <= ceiling, || format!("r={} v={}: ratio {:.3} above {ceiling}", row.r, row.v, row.ratio));
    }
    f.notes.push(format!("k={k} worst U_r/bound ratio {:.4} (ceiling {ceiling})", rep.worst_ratio()));
    Ok(f)
}

pub fn lemma53(k: u32, v_max: usize, gamma_max: usize, samples: u64, seed: u64, ceiling: f64) -> Result<Findings> {
    let rep = lemma53_check(k, v_max, gamma_max, samples, seed, ceiling)?;
    let mut f = Findings::default();
    for row in &rep.rows {
        f.expect(row.trivial_ok, || format!("T(r={}, v={}, γ={}) exceeds 1/r!", row.r, row.v, row.gamma));
        f.expect(row.ratio <= ceiling, || {
            format!("r={} v={} γ={}: ratio {:.3} above {ceiling}", row.r, row.v, row.gamma, row.ratio)
        });
    }
    f.notes.push(format!("k={k} worst T_mu ratio {:.4} (ceiling {ceiling})", rep.worst_ratio()));
    Ok(f)
}
