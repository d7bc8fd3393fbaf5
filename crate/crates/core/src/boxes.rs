//! Divisor boxes and the measure of their union.
//!
//! Each ordered divisor tuple `(d_1, ..., d_k)` with `d_1 ⋯ d_k | a` carries
//! the half-open box `∏ [log(d_i/2), log d_i)`. Since `log` is monotone, the
//! union can be resolved on the grid of breakpoints `{d/2, d}` per axis, which
//! after doubling are the integers `{d, 2d}`. Cells are classified with
//! integer comparisons only; floating point enters in the final
//! `∏ (log hi - log lo)` products.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{Factorization, SieveTable};
use crate::error::{Error, Result};

/// Default ceiling on the number of divisor tuples enumerated per integer.
pub const DEFAULT_TUPLE_CAP: u128 = 1_000_000;
/// Default ceiling on the number of grid cells in [`union_volume`].
pub const DEFAULT_GRID_CAP: u128 = 100_000_000;

/// The multiset of divisor boxes of `a`, stored by upper corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorBoxSet {
    k: usize,
    corners: Vec<Vec<u64>>,
}

impl DivisorBoxSet {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Upper corners `(d_1, ..., d_k)`, one per ordered tuple.
    pub fn corners(&self) -> &[Vec<u64>] {
        &self.corners
    }

    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

/// Ordered `k`-tuples of divisors whose product divides `f.n()`.
pub fn divisor_tuples(f: &Factorization, k: usize, cap: u128) -> Result<Vec<Vec<u64>>> {
    let count = f.tau_multi(k as u32)?;
    if count > cap {
        return Err(Error::Capacity { what: "divisor tuples", needed: count, limit: cap });
    }
    let primes: Vec<u64> = f.primes().collect();
    let mut rem: Vec<u32> = f.factors().iter().map(|&(_, e)| e).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = Vec::with_capacity(k);

    fn divisors_of(primes: &[u64], rem: &[u32]) -> Vec<(u64, Vec<u32>)> {
        let mut out = vec![(1u64, vec![0u32; primes.len()])];
        for (j, &p) in primes.iter().enumerate() {
            let len = out.len();
            for i in 0..len {
                let (mut v, e) = out[i].clone();
                for x in 1..=rem[j] {
                    v *= p;
                    let mut e2 = e.clone();
                    e2[j] = x;
                    out.push((v, e2));
                }
            }
        }
        out
    }

    fn go(primes: &[u64], rem: &mut Vec<u32>, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for (d, e) in divisors_of(primes, rem) {
            for (r, x) in rem.iter_mut().zip(&e) {
                *r -= x;
            }
            cur.push(d);
            go(primes, rem, left - 1, cur, out);
            cur.pop();
            for (r, x) in rem.iter_mut().zip(&e) {
                *r += x;
            }
        }
    }
    go(&primes, &mut rem, k, &mut cur, &mut out);
    Ok(out)
}

pub fn box_set(f: &Factorization, k: usize, cap: u128) -> Result<DivisorBoxSet> {
    if k == 0 {
        return Err(Error::domain("box dimension k must be at least 1"));
    }
    Ok(DivisorBoxSet { k, corners: divisor_tuples(f, k, cap)? })
}

/// Lebesgue measure of the union of the boxes, by coordinate compression.
pub fn union_volume(b: &DivisorBoxSet) -> Result<f64> {
    union_volume_capped(b, DEFAULT_GRID_CAP)
}

pub fn union_volume_capped(b: &DivisorBoxSet, grid_cap: u128) -> Result<f64> {
    if b.is_empty() {
        return Ok(0.0);
    }
    let k = b.k;
    // doubled breakpoints per axis: box [d/2, d) becomes [d, 2d)
    let axes: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut v: Vec<u64> = b.corners.iter().flat_map(|c| [c[i], 2 * c[i]]).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let dims: Vec<usize> = axes.iter().map(|a| a.len() - 1).collect();
    let cells = dims.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128));
    let cells = cells.ok_or(Error::Overflow("grid size"))?;
    if cells > grid_cap {
        return Err(Error::Capacity { what: "union grid cells", needed: cells, limit: grid_cap });
    }
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut occupied = vec![false; cells as usize];

    let mut ranges = vec![(0usize, 0usize); k];
    for c in &b.corners {
        for i in 0..k {
            let lo = axes[i].binary_search(&c[i]).expect("breakpoint");
            let hi = axes[i].binary_search(&(2 * c[i])).expect("breakpoint");
            ranges[i] = (lo, hi);
        }
        mark(&mut occupied, &ranges, &strides, 0, 0);
    }

    let widths: Vec<Vec<f64>> =
        axes.iter().map(|a| a.windows(2).map(|w| (w[1] as f64).ln() - (w[0] as f64).ln()).collect()).collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; k];
    for (flat, &occ) in occupied.iter().enumerate() {
        if occ {
            let mut rest = flat;
            for i in 0..k {
                idx[i] = rest / strides[i];
                rest %= strides[i];
            }
            total += (0..k).map(|i| widths[i][idx[i]]).product::<f64>();
        }
    }
    Ok(total)
}

fn mark(occupied: &mut [bool], ranges: &[(usize, usize)], strides: &[usize], axis: usize, base: usize) {
    let (lo, hi) = ranges[axis];
    if axis + 1 == ranges.len() {
        occupied[base + lo..base + hi].iter_mut().for_each(|c| *c = true);
        return;
    }
    for j in lo..hi {
        mark(occupied, ranges, strides, axis + 1, base + j * strides[axis]);
    }
}

/// `L^{(k+1)}(a)` straight from a factorization, with default caps.
pub fn l_volume(f: &Factorization, k: usize) -> Result<f64> {
    union_volume(&box_set(f, k, DEFAULT_TUPLE_CAP)?)
}

/// `min{τ_{k+1}(a) (log 2)^k, (log a + log 2)^k}`.
pub fn simple_bound(f: &Factorization, k: usize) -> Result<f64> {
    let ln2 = std::f64::consts::LN_2;
    let tau = f.tau_multi(k as u32)? as f64;
    Ok((tau * ln2.powi(k as i32)).min(((f.n() as f64).ln() + ln2).powi(k as i32)))
}

/// `τ_{k+1}(a) L^{(k+1)}(b)` for coprime `a`, `b`.
pub fn coprime_bound(fa: &Factorization, fb: &Factorization, k: usize) -> Result<f64> {
    Ok(fa.tau_multi(k as u32)? as f64 * l_volume(fb, k)?)
}

/// `min_j (k+1)^{m-j} (log(p_1 ⋯ p_j) + log 2)^k` for the primes in the
/// given order.
pub fn prefix_bound(primes: &[u64], k: usize) -> f64 {
    let m = primes.len();
    let mut log_prefix = 0.0;
    let mut best = f64::INFINITY;
    for (j, &p) in primes.iter().enumerate() {
        log_prefix += (p as f64).ln();
        let v = ((k + 1) as f64).powi((m - j - 1) as i32) * (log_prefix + std::f64::consts::LN_2).powi(k as i32);
        best = best.min(v);
    }
    best
}

/// `W^P_{k+1}(a)`: for each divisor tuple `d`, count tuples `d'` with
/// `d_i/2 < d'_i < 2 d_i` in every coordinate and sum `count^{P-1}`.
pub fn w_p(f: &Factorization, k: usize, p: f64, cap: u128) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("W_P needs P > 1, got {p}")));
    }
    let tuples = divisor_tuples(f, k, cap)?;
    let near = |d: &[u64], e: &[u64]| d.iter().zip(e).all(|(&a, &b)| a < 2 * b && b < 2 * a);
    let counts: Vec<u64> = tuples.par_iter().map(|d| tuples.iter().filter(|e| near(d, e)).count() as u64).collect();
    Ok(counts.iter().map(|&c| (c as f64).powf(p - 1.0)).sum())
}

/// Both sides of the Hölder-type inequality
/// `Σ τ(a)/a <= ((log 2)^{-k} Σ L(a)/a)^{1-1/P} (Σ W^P(a)/a)^{1/P}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl HolderCheck {
    /// `lhs <= rhs` up to a relative tolerance.
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_tol)
    }
}

pub fn holder_check(set: &[u64], k: usize, p: f64, sieve: &SieveTable) -> Result<HolderCheck> {
    if set.is_empty() {
        return Err(Error::domain("holder_check needs a nonempty set"));
    }
    let mut tau_sum = 0.0;
    let mut l_sum = 0.0;
    let mut w_sum = 0.0;
    for &a in set {
        let f = sieve.factorize(a)?;
        let af = a as f64;
        tau_sum += f.tau_multi(k as u32)? as f64 / af;
        l_sum += l_volume(&f, k)? / af;
        w_sum += w_p(&f, k, p, DEFAULT_TUPLE_CAP)? / af;
    }
    let ln2k = std::f64::consts::LN_2.powi(k as i32);
    Ok(HolderCheck { lhs: tau_sum, rhs: (l_sum / ln2k).powf(1.0 - 1.0 / p) * w_sum.powf(1.0 / p) })
}

/// Squarefree integers `a <= a_max` whose prime factors are all `<= t`,
/// ascending, with their factorizations.
pub fn smooth_squarefree(t: u64, a_max: u64, sieve: &SieveTable) -> Result<Vec<Factorization>> {
    sieve.ensure_covers(a_max)?;
    let primes: Vec<u64> = sieve.primes().iter().map(|&p| p as u64).take_while(|&p| p <= t && p <= a_max).collect();
    let mut out = Vec::new();
    fn go(
        primes: &[u64],
        start: usize,
        value: u64,
        a_max: u64,
        chosen: &mut Vec<(u64, u32)>,
        out: &mut Vec<Factorization>,
    ) {
        out.push(Factorization::from_prime_powers(chosen.clone()).expect("distinct primes"));
        for i in start..primes.len() {
            let Some(nv) = value.checked_mul(primes[i]) else { break };
            if nv > a_max {
                break;
            }
            chosen.push((primes[i], 1));
            go(primes, i + 1, nv, a_max, chosen, out);
            chosen.pop();
        }
    }
    go(&primes, 0, 1, a_max, &mut Vec::new(), &mut out);
    out.sort_unstable_by_key(|f| f.n());
    Ok(out)
}

/// Truncated `S^{(k+1)}(t)` and its split by `omega_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SPartial {
    pub k: usize,
    pub t: u64,
    pub a_max: u64,
    pub total: f64,
    /// `r -> Σ L(a)/a` over the terms with `omega_k(a) = r`.
    pub by_omega_k: BTreeMap<usize, f64>,
}

/// `Σ L^{(k+1)}(a)/a` over squarefree `a <= a_max` with `P^+(a) <= t`.
/// A lower bound for the infinite sum; never extrapolated.
pub fn s_partial(k: usize, t: u64, a_max: u64, sieve: &SieveTable) -> Result<SPartial> {
    let terms = smooth_squarefree(t, a_max, sieve)?;
    let values: Vec<Result<(usize, f64)>> =
        terms.par_iter().map(|f| Ok((f.omega_above(k as u64), l_volume(f, k)? / f.n() as f64))).collect();
    let mut total = 0.0;
    let mut by_omega_k = BTreeMap::new();
    for v in values {
        let (r, x) = v?;
        total += x;
        *by_omega_k.entry(r).or_insert(0.0) += x;
    }
    Ok(SPartial { k, t, a_max, total, by_omega_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn sieve() -> SieveTable {
        SieveTable::new(10_000).unwrap()
    }

    #[test]
    fn box_set_examples() {
        let s = sieve();
        let one = box_set(&s.factorize(1).unwrap(), 1, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(one.corners(), &[vec![1]]);
        let two = box_set(&s.factorize(2).unwrap(), 1, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(two.corners(), &[vec![1], vec![2]]);
        let six = box_set(&s.factorize(6).unwrap(), 2, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(six.len(), 9);
        assert!(box_set(&s.factorize(6).unwrap(), 2, 8).is_err());
    }

    #[test]
    fn union_volume_examples() {
        let s = sieve();
        assert!((l_volume(&s.factorize(1).unwrap(), 1).unwrap() - LN_2).abs() < 1e-15);
        for k in 1..=4 {
            let v = l_volume(&s.factorize(1).unwrap(), k).unwrap();
            assert!((v - LN_2.powi(k as i32)).abs() < 1e-15);
        }
        assert!((l_volume(&s.factorize(6).unwrap(), 1).unwrap() - 12f64.ln()).abs() < 1e-14);
        assert!((l_volume(&s.factorize(2).unwrap(), 1).unwrap() - 2.0 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn grid_cap() {
        let s = sieve();
        let b = box_set(&s.factorize(2310).unwrap(), 2, DEFAULT_TUPLE_CAP).unwrap();
        assert!(matches!(union_volume_capped(&b, 10), Err(Error::Capacity { .. })));
    }

    #[test]
    fn w_p_examples() {
        let s = sieve();
        for k in 1..4 {
            for p in [1.25, 2.0, 3.0] {
                assert_eq!(w_p(&s.factorize(1).unwrap(), k, p, DEFAULT_TUPLE_CAP).unwrap(), 1.0);
            }
        }
        assert_eq!(w_p(&s.factorize(6).unwrap(), 1, 2.0, DEFAULT_TUPLE_CAP).unwrap(), 6.0);
        assert_eq!(w_p(&s.factorize(2).unwrap(), 1, 2.0, DEFAULT_TUPLE_CAP).unwrap(), 2.0);
        assert!(w_p(&s.factorize(2).unwrap(), 1, 1.0, DEFAULT_TUPLE_CAP).is_err());
    }

    #[test]
    fn holder_examples() {
        let s = sieve();
        let h = holder_check(&[1], 1, 2.0, &s).unwrap();
        assert!((h.lhs - 1.0).abs() < 1e-15 && (h.rhs - 1.0).abs() < 1e-15);
        let h = holder_check(&[1, 2, 3, 6], 1, 2.0, &s).unwrap();
        assert!((h.lhs - 10.0 / 3.0).abs() < 1e-14);
        // rhs = sqrt((log2 + log2 + 2log2/3 + log12/6)/log2 * 11/3)
        let l = (LN_2 + LN_2 + 2.0 * LN_2 / 3.0 + 12f64.ln() / 6.0) / LN_2;
        assert!((h.rhs - (l * 11.0 / 3.0).sqrt()).abs() < 1e-13);
        assert!((h.rhs - 3.459_564_740_669_72).abs() < 1e-12);
        assert!(h.holds(1e-9));
        assert!(holder_check(&[], 1, 2.0, &s).is_err());
    }

    #[test]
    fn s_partial_examples() {
        let s = sieve();
        let sp = s_partial(1, 2, 10, &s).unwrap();
        assert!((sp.total - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(sp.by_omega_k.len(), 2);
        for a_max in [1, 5, 100] {
            let sp = s_partial(1, 1, a_max, &s).unwrap();
            assert!((sp.total - LN_2).abs() < 1e-15);
        }
        let sp = s_partial(2, 7, 500, &s).unwrap();
        assert!(sp.total >= LN_2 * LN_2);
        let by_r: f64 = sp.by_omega_k.values().sum();
        assert!((by_r - sp.total).abs() < 1e-12);
    }

    #[test]
    fn smooth_enumeration_is_exhaustive() {
        let s = sieve();
        let got: Vec<u64> = smooth_squarefree(5, 100, &s).unwrap().iter().map(|f| f.n()).collect();
        let expect: Vec<u64> = (1..=100)
            .filter(|&n| {
                let f = s.factorize(n).unwrap();
                f.is_squarefree() && f.largest_prime().unwrap_or(1) <= 5
            })
            .collect();
        assert_eq!(got, expect);
    }
}
