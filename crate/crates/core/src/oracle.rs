//! Slow, independent reference implementations.
//!
//! Nothing here shares code paths with the fast routines it checks: divisors
//! come from trial division, windows are compared as rationals without
//! flooring, and the order-statistics volume uses a determinant formula
//! instead of iterated integration.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{primes_up_to, KahanSum, LambdaSeq};
use crate::boxes::DivisorBoxSet;
use crate::localized::Window;
use crate::Rational;

/// All divisors of `n >= 1`, ascending, by trial division.
pub fn divisors_trial(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Prime factorization by trial division.
pub fn factor_trial(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree_trial(n: u64) -> bool {
    factor_trial(n).iter().all(|&(_, e)| e == 1)
}

fn in_window(w: &Window, i: usize, d: u64) -> bool {
    let d = Rational::from_integer(d as i128);
    w.y()[i] < d && d <= w.z()[i]
}

/// `τ_{k+1}(n, y, z)` by scanning every ordered divisor tuple.
pub fn tau_localized_bruteforce(n: u64, w: &Window) -> u128 {
    fn go(rem: u64, i: usize, w: &Window) -> u128 {
        if i == w.k() {
            return 1;
        }
        divisors_trial(rem).into_iter().filter(|&d| in_window(w, i, d)).map(|d| go(rem / d, i + 1, w)).sum()
    }
    go(n, 0, w)
}

/// `H(x, y, z)` by marking every multiple of every product `d_1 ⋯ d_k`
/// of in-window integers. `squarefree` restricts the count.
pub fn h_count_marking(x: u64, w: &Window, squarefree: bool) -> u64 {
    let mut marked = vec![false; x as usize + 1];
    fn go(x: u64, prod: u64, i: usize, w: &Window, marked: &mut [bool]) {
        if i == w.k() {
            let mut m = prod;
            while m <= x {
                marked[m as usize] = true;
                m += prod;
            }
            return;
        }
        let mut d = 1u64;
        while prod * d <= x {
            if in_window(w, i, d) {
                go(x, prod * d, i + 1, w, marked);
            }
            d += 1;
        }
    }
    go(x, 1, 0, w, &mut marked);
    (1..=x).filter(|&n| marked[n as usize] && (!squarefree || is_squarefree_trial(n))).count() as u64
}

/// Measure of a union of 1-D half-open intervals by sort-and-merge.
pub fn merged_length(mut intervals: Vec<(f64, f64)>) -> f64 {
    intervals.retain(|(a, b)| b > a);
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in intervals {
        cur = match cur {
            Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((a, b)) = cur {
        total += b - a;
    }
    total
}

/// `L^{(2)}(a)`: the union of `[log(d/2), log d)` over `d | a`.
pub fn l_volume_1d(a: u64) -> f64 {
    merged_length(divisors_trial(a).into_iter().map(|d| ((d as f64 / 2.0).ln(), (d as f64).ln())).collect())
}

/// Monte Carlo estimate of the union measure of a box set with its
/// standard error. A point `u` is covered iff some tuple has
/// `d_i ∈ (e^{u_i}, 2 e^{u_i}]` in every coordinate.
pub fn union_volume_mc(b: &DivisorBoxSet, samples: u64, seed: u64) -> (f64, f64) {
    let k = b.k();
    let corners: HashSet<&[u64]> = b.corners().iter().map(|c| c.as_slice()).collect();
    let mut axis: Vec<Vec<u64>> = vec![Vec::new(); k];
    for c in b.corners() {
        for (i, &d) in c.iter().enumerate() {
            axis[i].push(d);
        }
    }
    for a in axis.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let lo: Vec<f64> = axis.iter().map(|a| (a[0] as f64 / 2.0).ln()).collect();
    let hi: Vec<f64> = axis.iter().map(|a| (*a.last().unwrap() as f64).ln()).collect();
    let ambient: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut u = vec![0.0; k];
    let mut cand: Vec<Vec<u64>> = vec![Vec::new(); k];
    for _ in 0..samples {
        for i in 0..k {
            u[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
            let e = u[i].exp();
            cand[i].clear();
            cand[i].extend(axis[i].iter().copied().filter(|&d| (d as f64) > e && (d as f64) <= 2.0 * e));
        }
        if covered(&cand, &corners, &mut Vec::with_capacity(k)) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (p * ambient, (p * (1.0 - p) / samples as f64).sqrt() * ambient)
}

fn covered(cand: &[Vec<u64>], corners: &HashSet<&[u64]>, cur: &mut Vec<u64>) -> bool {
    if cur.len() == cand.len() {
        return corners.contains(cur.as_slice());
    }
    for &d in &cand[cur.len()] {
        cur.push(d);
        let hit = covered(cand, corners, cur);
        cur.pop();
        if hit {
            return true;
        }
    }
    false
}

/// `A_{k+1}(N)` by hashing every product of an unordered tuple.
pub fn table_count_hashset(kp1: usize, n: u64) -> u64 {
    let mut seen = HashSet::new();
    fn go(n: u64, start: u64, left: usize, prod: u128, seen: &mut HashSet<u128>) {
        if left == 0 {
            seen.insert(prod);
            return;
        }
        for x in start..=n {
            go(n, x, left - 1, prod * x as u128, seen);
        }
    }
    go(n, 1, kp1, 1, &mut seen);
    seen.len() as u64
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut out = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            out = -out;
        }
        let pivot = m[c][c].clone();
        out *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= t;
            }
        }
    }
    out
}

/// `Vol{0 <= ξ_1 <= ... <= ξ_r <= 1 : ξ_i >= a_i}` via Steck's determinant
/// `det[(1 - a_j)_+^{j-i+1} / (j-i+1)!]` (entries with `j < i - 1` vanish;
/// the probability for `r` sorted uniforms is `r!` times this). Thresholds are clamped to `[0, 1]` first.
pub fn simplex_volume_steck(a: &[BigRational]) -> BigRational {
    let r = a.len();
    let one = BigRational::one();
    let clamped: Vec<BigRational> = a.iter().map(|x| x.clone().clamp(BigRational::zero(), one.clone())).collect();
    let mut fact = vec![BigInt::one()];
    for i in 1..=r {
        let next = fact[i - 1].clone() * BigInt::from(i);
        fact.push(next);
    }
    let m: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if j + 1 < i {
                        return BigRational::zero();
                    }
                    let e = j + 1 - i;
                    let base = &one - &clamped[j];
                    if base.is_negative() {
                        return BigRational::zero();
                    }
                    let mut p = BigRational::one();
                    for _ in 0..e {
                        p *= &base;
                    }
                    p / BigRational::from_integer(fact[e].clone())
                })
                .collect()
        })
        .collect();
    det(m)
}

/// Re-derives each block of a λ sequence from a fresh prime list and
/// returns a description of every disagreement (empty when all blocks are
/// greedy-maximal).
pub fn lambda_greedy_violations(seq: &LambdaSeq) -> Vec<String> {
    let primes = primes_up_to(seq.prime_limit);
    let mut bad = Vec::new();
    let expect0 = primes.iter().find(|&&p| p > seq.k as u64).map(|p| p - 1);
    if expect0 != Some(seq.lambdas[0]) {
        bad.push(format!("lambda_0 = {} but expected {:?}", seq.lambdas[0], expect0));
    }
    for j in 1..seq.lambdas.len() {
        let (lo, hi) = (seq.lambdas[j - 1], seq.lambdas[j]);
        let mut s = KahanSum::default();
        for &p in primes.iter().filter(|&&p| p > lo && p <= hi) {
            s.add(1.0 / p as f64);
        }
        if s.value() > seq.log_rho {
            bad.push(format!("block {j} sum {} exceeds log rho", s.value()));
        }
        match primes.iter().find(|&&p| p > hi) {
            Some(&next) if s.peek_add(1.0 / next as f64) <= seq.log_rho => {
                bad.push(format!("block {j} could still admit {next}"));
            }
            None => bad.push(format!("block {j} has no closing prime below the limit")),
            _ => {}
        }
        if !primes.binary_search(&hi).is_ok() {
            bad.push(format!("lambda_{j} = {hi} is not prime"));
        }
    }
    bad
}
