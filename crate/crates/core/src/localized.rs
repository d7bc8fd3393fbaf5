//! Localized divisor counts `tau_{k+1}(n, y, z)` and the counting functions
//! built on them.
//!
//! Window bounds are exact rationals. Because divisors are integers, the
//! half-open condition `y < d <= z` is equivalent to
//! `floor(y) < d <= floor(z)`, so membership never touches floating point.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{Factorization, SieveTable};
use crate::error::{Error, Result};
use crate::table::table_count;
use crate::Rational;

const BLOCK: u64 = 2048;

/// A product of `k` half-open intervals `(y_i, z_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    y: Vec<Rational>,
    z: Vec<Rational>,
    dyadic: bool,
    // floor(y_i), floor(z_i)
    lo: Vec<u64>,
    hi: Vec<u64>,
}

impl Window {
    pub fn new(y: Vec<Rational>, z: Vec<Rational>) -> Result<Self> {
        if y.is_empty() || y.len() != z.len() {
            return Err(Error::domain(format!("window needs k >= 1 matching bounds, got {} and {}", y.len(), z.len())));
        }
        if y.iter().chain(&z).any(|b| !b.is_positive()) {
            return Err(Error::domain("window bounds must be positive"));
        }
        let lo = y.iter().map(floor_u64).collect();
        let hi = z.iter().map(floor_u64).collect();
        Ok(Window { y, z, dyadic: false, lo, hi })
    }

    /// The window `(y_i, 2 y_i]`.
    pub fn dyadic(y: Vec<Rational>) -> Result<Self> {
        let z = y.iter().map(|v| v * Rational::from_integer(2)).collect();
        let mut w = Window::new(y, z)?;
        w.dyadic = true;
        Ok(w)
    }

    /// Same window in every coordinate.
    pub fn uniform(k: usize, y: Rational, z: Rational) -> Result<Self> {
        Window::new(vec![y; k], vec![z; k])
    }

    pub fn k(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    pub fn z(&self) -> &[Rational] {
        &self.z
    }

    pub fn is_dyadic(&self) -> bool {
        self.dyadic
    }

    /// True when some coordinate interval is empty.
    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| h <= l)
    }

    /// Exact membership test `y_i < d <= z_i`.
    pub fn contains(&self, i: usize, d: u64) -> bool {
        d > self.lo[i] && d <= self.hi[i]
    }

    /// Permute the coordinates: coordinate `i` of the result is coordinate
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Window {
        let y = perm.iter().map(|&i| self.y[i]).collect();
        let z = perm.iter().map(|&i| self.z[i]).collect();
        let mut w = Window::new(y, z).expect("permutation of a valid window");
        w.dyadic = self.dyadic;
        w
    }
}

fn floor_u64(r: &Rational) -> u64 {
    r.floor().to_integer().max(0) as u64
}

/// Which integers `H` counts and how they are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// Every `n <= x`.
    All,
    /// Squarefree `n <= x` only.
    Squarefree,
    /// Squarefree `n` in `(x/2, x]`, each weighted by `phi(n)/n`.
    PhiWeightedHalfDyadic,
}

/// Result of [`h_count`]: exact for the unweighted modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HValue {
    Count(u64),
    Weighted(f64),
}

impl HValue {
    pub fn as_f64(self) -> f64 {
        match self {
            HValue::Count(c) => c as f64,
            HValue::Weighted(w) => w,
        }
    }

    pub fn count(self) -> Option<u64> {
        match self {
            HValue::Count(c) => Some(c),
            HValue::Weighted(_) => None,
        }
    }
}

/// Divisors of `∏ p_j^{rem_j}` that are at most `bound`, with exponent vectors.
fn divisors_below(factors: &[(u64, u32)], rem: &[u32], bound: u64, out: &mut Vec<(u64, Vec<u32>)>) {
    fn go(
        factors: &[(u64, u32)],
        rem: &[u32],
        bound: u64,
        idx: usize,
        value: u64,
        exps: &mut Vec<u32>,
        out: &mut Vec<(u64, Vec<u32>)>,
    ) {
        if idx == factors.len() {
            out.push((value, exps.clone()));
            return;
        }
        let p = factors[idx].0;
        let mut v = value;
        for e in 0..=rem[idx] {
            exps[idx] = e;
            go(factors, rem, bound, idx + 1, v, exps, out);
            match v.checked_mul(p) {
                Some(nv) if nv <= bound => v = nv,
                _ => break,
            }
        }
        exps[idx] = 0;
    }
    let mut exps = vec![0; factors.len()];
    go(factors, rem, bound, 0, 1, &mut exps, out);
}

/// Candidates for coordinate `i`: divisors of the remaining cofactor inside
/// `(y_i, z_i]`.
fn candidates(f: &Factorization, rem: &[u32], w: &Window, i: usize) -> Vec<(u64, Vec<u32>)> {
    let mut all = Vec::new();
    divisors_below(f.factors(), rem, w.hi[i], &mut all);
    all.retain(|(d, _)| w.contains(i, *d));
    all
}

fn count_rec(f: &Factorization, rem: &mut Vec<u32>, w: &Window, i: usize) -> u128 {
    if i == w.k() {
        return 1;
    }
    let mut total = 0u128;
    for (_, e) in candidates(f, rem, w, i) {
        for (r, x) in rem.iter_mut().zip(&e) {
            *r -= x;
        }
        total += count_rec(f, rem, w, i + 1);
        for (r, x) in rem.iter_mut().zip(&e) {
            *r += x;
        }
    }
    total
}

fn exists_rec(f: &Factorization, rem: &mut Vec<u32>, w: &Window, i: usize) -> bool {
    if i == w.k() {
        return true;
    }
    let mut cands = candidates(f, rem, w, i);
    cands.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    for (_, e) in cands {
        for (r, x) in rem.iter_mut().zip(&e) {
            *r -= x;
        }
        let hit = exists_rec(f, rem, w, i + 1);
        for (r, x) in rem.iter_mut().zip(&e) {
            *r += x;
        }
        if hit {
            return true;
        }
    }
    false
}

/// `tau_{k+1}(n, y, z)` for an already factored `n`.
pub fn tau_localized_factored(f: &Factorization, w: &Window) -> u128 {
    if w.is_empty() {
        return 0;
    }
    let mut rem: Vec<u32> = f.factors().iter().map(|&(_, e)| e).collect();
    count_rec(f, &mut rem, w, 0)
}

/// Number of ordered `k`-tuples `(d_1, ..., d_k)` with `d_1 ⋯ d_k | n` and
/// `y_i < d_i <= z_i`.
pub fn tau_localized(n: u64, w: &Window, sieve: &SieveTable) -> Result<u128> {
    let f = sieve.factorize(n)?;
    Ok(tau_localized_factored(&f, w))
}

pub fn has_localized_factored(f: &Factorization, w: &Window) -> bool {
    if w.is_empty() {
        return false;
    }
    let mut rem: Vec<u32> = f.factors().iter().map(|&(_, e)| e).collect();
    exists_rec(f, &mut rem, w, 0)
}

/// Whether `n` admits at least one localized factorization. Exits on the
/// first tuple found.
pub fn has_localized(n: u64, w: &Window, sieve: &SieveTable) -> Result<bool> {
    let f = sieve.factorize(n)?;
    Ok(has_localized_factored(&f, w))
}

/// `H^{(k+1)}(x, y, z)` and its squarefree / `phi`-weighted variants.
///
/// `[1, x]` is split into fixed blocks evaluated in parallel; block results
/// are combined in block order so the weighted sum is reproducible.
pub fn h_count(x: &Rational, w: &Window, mode: CountMode, sieve: &SieveTable) -> Result<HValue> {
    if x.is_negative() {
        return Err(Error::domain("x must be nonnegative"));
    }
    let top = floor_u64(x);
    sieve.ensure_covers(top)?;
    let start = match mode {
        CountMode::PhiWeightedHalfDyadic => floor_u64(&(x / Rational::from_integer(2))) + 1,
        _ => 1,
    };
    if top < start {
        return Ok(match mode {
            CountMode::PhiWeightedHalfDyadic => HValue::Weighted(0.0),
            _ => HValue::Count(0),
        });
    }
    let blocks: Vec<(u64, u64)> =
        (start..=top).step_by(BLOCK as usize).map(|b| (b, (b + BLOCK - 1).min(top))).collect();

    let per_block: Vec<Result<(u64, f64)>> = blocks
        .par_iter()
        .map(|&(a, b)| {
            let mut count = 0u64;
            let mut weight = 0.0f64;
            for n in a..=b {
                let f = sieve.factorize(n)?;
                if mode != CountMode::All && !f.is_squarefree() {
                    continue;
                }
                if has_localized_factored(&f, w) {
                    count += 1;
                    if mode == CountMode::PhiWeightedHalfDyadic {
                        weight += f.phi() as f64 / n as f64;
                    }
                }
            }
            Ok((count, weight))
        })
        .collect();

    let mut count = 0u64;
    let mut weight = 0.0;
    for r in per_block {
        let (c, wgt) = r?;
        count += c;
        weight += wgt;
    }
    Ok(match mode {
        CountMode::PhiWeightedHalfDyadic => HValue::Weighted(weight),
        _ => HValue::Count(count),
    })
}

/// Both sides of the elementary sandwich around `A_{k+1}(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sandwich {
    pub lower: u64,
    pub a: u64,
    pub upper_sum: u64,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.a && self.a <= self.upper_sum
    }
}

/// Computes
/// `H(N^{k+1}/2^k, (N/2,...), (N,...)) <= A_{k+1}(N) <= Σ_m H(N^{k+1}/2^{|m|}, N/2^{m+1}, N/2^m)`
/// where `m` ranges over `{m : 1 <= 2^{m_i} <= N}^k`.
pub fn sandwich_check(k: usize, n: u64, sieve: &SieveTable) -> Result<Sandwich> {
    if k == 0 || n == 0 {
        return Err(Error::domain("sandwich needs k >= 1 and N >= 1"));
    }
    let top = (n as u128).checked_pow(k as u32 + 1).ok_or(Error::Overflow("N^(k+1)"))?;
    if top > sieve.limit() as u128 {
        return Err(Error::OutOfRange { value: top, limit: sieve.limit() as u128 });
    }
    let top_r = Rational::from_integer(top as i128);
    let nr = Rational::from_integer(n as i128);
    let two = Rational::from_integer(2);

    let lower_w = Window::uniform(k, nr / two, nr)?;
    let lower = h_count(&(top_r / pow2(k as u32)), &lower_w, CountMode::All, sieve)?.count().expect("unweighted");

    let a = table_count(k, n, crate::table::Backing::default())?;

    let m_max = 63 - n.leading_zeros(); // largest m with 2^m <= N
    let mut upper = 0u64;
    let mut m = vec![0u32; k];
    loop {
        let y: Vec<Rational> = m.iter().map(|&mi| nr / pow2(mi + 1)).collect();
        let z: Vec<Rational> = m.iter().map(|&mi| nr / pow2(mi)).collect();
        let x = top_r / pow2(m.iter().sum());
        upper += h_count(&x, &Window::new(y, z)?, CountMode::All, sieve)?.count().expect("unweighted");
        // odometer over {0..=m_max}^k
        let mut i = 0;
        while i < k && m[i] == m_max {
            m[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        m[i] += 1;
    }
    Ok(Sandwich { lower, a, upper_sum: upper })
}

fn pow2(e: u32) -> Rational {
    let mut r = Rational::one();
    for _ in 0..e {
        r *= Rational::from_integer(2);
    }
    r
}

/// Convenience: build a rational `num/den`.
pub fn ratio(num: i128, den: i128) -> Rational {
    assert!(!den.is_zero());
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    fn sieve() -> SieveTable {
        SieveTable::new(100_000).unwrap()
    }

    #[test]
    fn tau_examples() {
        let s = sieve();
        let w1 = Window::uniform(1, int(2), int(4)).unwrap();
        assert_eq!(tau_localized(12, &w1, &s).unwrap(), 2);
        let w2 = Window::uniform(2, int(2), int(4)).unwrap();
        assert_eq!(tau_localized(36, &w2, &s).unwrap(), 3);
        let empty = Window::new(vec![int(5), int(1)], vec![int(5), int(9)]).unwrap();
        assert!(empty.is_empty());
        for n in 1..200 {
            assert_eq!(tau_localized(n, &empty, &s).unwrap(), 0);
            assert!(!has_localized(n, &empty, &s).unwrap());
        }
    }

    #[test]
    fn has_examples() {
        let s = sieve();
        let w = Window::uniform(1, int(2), int(4)).unwrap();
        assert!(has_localized(12, &w, &s).unwrap());
        assert!(!has_localized(7, &w, &s).unwrap());
    }

    #[test]
    fn fractional_bounds_are_exact() {
        let s = sieve();
        // (3/2, 3]: divisors 2 and 3 of 6
        let w = Window::uniform(1, ratio(3, 2), int(3)).unwrap();
        assert_eq!(tau_localized(6, &w, &s).unwrap(), 2);
        // (2, 5/2]: nothing integral except none
        let w = Window::uniform(1, int(2), ratio(5, 2)).unwrap();
        assert!(w.is_empty());
        // (1/2, 1]: only d = 1
        let w = Window::uniform(1, ratio(1, 2), int(1)).unwrap();
        assert_eq!(tau_localized(30, &w, &s).unwrap(), 1);
    }

    #[test]
    fn h_examples() {
        let s = sieve();
        let w1 = Window::uniform(1, int(2), int(4)).unwrap();
        assert_eq!(h_count(&int(20), &w1, CountMode::All, &s).unwrap(), HValue::Count(10));
        let w2 = Window::uniform(2, int(2), int(4)).unwrap();
        assert_eq!(h_count(&int(50), &w2, CountMode::All, &s).unwrap(), HValue::Count(10));
        let d = Window::dyadic(vec![int(2)]).unwrap();
        assert_eq!(d, Window { dyadic: true, ..w1.clone() });
        match h_count(&int(8), &d, CountMode::PhiWeightedHalfDyadic, &s).unwrap() {
            HValue::Weighted(v) => assert!((v - 1.0 / 3.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn h_out_of_range() {
        let s = SieveTable::new(100).unwrap();
        let w = Window::uniform(1, int(2), int(4)).unwrap();
        assert!(matches!(h_count(&int(101), &w, CountMode::All, &s), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn sandwich_examples() {
        let s = sieve();
        assert_eq!(sandwich_check(1, 4, &s).unwrap(), Sandwich { lower: 4, a: 9, upper_sum: 16 });
        let one = sandwich_check(1, 1, &s).unwrap();
        assert_eq!((one.lower, one.a), (0, 1));
        assert!(one.upper_sum >= 1);
        let k2 = sandwich_check(2, 2, &s).unwrap();
        assert_eq!(k2.a, 4);
        assert!(k2.holds());
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(vec![], vec![]).is_err());
        assert!(Window::new(vec![int(1)], vec![int(1), int(2)]).is_err());
        assert!(Window::new(vec![int(0)], vec![int(2)]).is_err());
    }
}
