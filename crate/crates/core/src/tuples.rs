//! Set tuples: `k` pairwise disjoint subsets of `{1, ..., B}`.
//!
//! A set tuple is stored as a labelling `{1..B} -> {0..k}` where label `j >= 1`
//! means membership in `Y_j` and label `0` means "in none of them" (the
//! implicit `Y_0`). For squarefree `a = p_1 ⋯ p_B` these are exactly the
//! divisor tuples `d_j = ∏_{i in Y_j} p_i`.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::ModelConstants;
use crate::error::{Error, Result};

/// Default ceiling on `(k+1)^B` for exhaustive enumerations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetTuple {
    k: usize,
    labels: Vec<u8>,
}

impl SetTuple {
    /// Build from explicit sets `Y_1, ..., Y_k` over `{1, ..., b}`.
    pub fn from_sets(b: usize, sets: &[BTreeSet<usize>]) -> Result<Self> {
        if sets.is_empty() || sets.len() > u8::MAX as usize {
            return Err(Error::domain("set tuple needs 1 <= k <= 255"));
        }
        let mut labels = vec![0u8; b];
        for (j, s) in sets.iter().enumerate() {
            for &x in s {
                if x == 0 || x > b {
                    return Err(Error::domain(format!("element {x} outside 1..={b}")));
                }
                if labels[x - 1] != 0 {
                    return Err(Error::domain(format!("element {x} appears in two sets")));
                }
                labels[x - 1] = (j + 1) as u8;
            }
        }
        Ok(SetTuple { k: sets.len(), labels })
    }

    pub fn from_labels(k: usize, labels: Vec<u8>) -> Result<Self> {
        if k == 0 || labels.iter().any(|&l| l as usize > k) {
            return Err(Error::domain("labels must lie in 0..=k with k >= 1"));
        }
        Ok(SetTuple { k, labels })
    }

    pub fn b(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Label of element `x` (1-based).
    pub fn label(&self, x: usize) -> usize {
        self.labels[x - 1] as usize
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// `Y_j` for `0 <= j <= k`; `Y_0` is the complement of the union.
    pub fn set(&self, j: usize) -> BTreeSet<usize> {
        (1..=self.b()).filter(|&x| self.label(x) == j).collect()
    }

    pub fn sets(&self) -> Vec<BTreeSet<usize>> {
        (1..=self.k).map(|j| self.set(j)).collect()
    }

    /// `(Y_{m_1}, ..., Y_{m_k})` for a permutation `m` of `1..=k`.
    pub fn permuted(&self, m: &[usize]) -> Result<SetTuple> {
        let mut seen: Vec<usize> = m.to_vec();
        seen.sort_unstable();
        if seen != (1..=self.k).collect::<Vec<_>>() {
            return Err(Error::domain("m must be a permutation of 1..=k"));
        }
        // new set i is old set m_i, so an element labelled m_i becomes i
        let mut inverse = vec![0u8; self.k + 1];
        for (i, &mi) in m.iter().enumerate() {
            inverse[mi] = (i + 1) as u8;
        }
        Ok(SetTuple { k: self.k, labels: self.labels.iter().map(|&l| inverse[l as usize]).collect() })
    }
}

fn tuple_count(b: usize, k: usize, cap: u128) -> Result<u128> {
    let n = ((k + 1) as u128).checked_pow(b as u32).ok_or(Error::Overflow("(k+1)^B"))?;
    if n > cap {
        return Err(Error::Capacity { what: "set tuples", needed: n, limit: cap });
    }
    Ok(n)
}

/// Iterator over all of `P_B` in lexicographic label order.
#[derive(Debug, Clone)]
pub struct SetTuples {
    k: usize,
    next: Option<Vec<u8>>,
}

impl Iterator for SetTuples {
    type Item = SetTuple;

    fn next(&mut self) -> Option<SetTuple> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        let mut done = true;
        while i > 0 {
            i -= 1;
            if (succ[i] as usize) < self.k {
                succ[i] += 1;
                done = false;
                break;
            }
            succ[i] = 0;
        }
        if !done {
            self.next = Some(succ);
        }
        Some(SetTuple { k: self.k, labels: cur })
    }
}

/// All `(k+1)^B` set tuples over `{1, ..., b}`.
pub fn enumerate_set_tuples(b: usize, k: usize, cap: u128) -> Result<SetTuples> {
    if k == 0 || k > u8::MAX as usize {
        return Err(Error::domain("set tuples need 1 <= k <= 255"));
    }
    tuple_count(b, k, cap)?;
    Ok(SetTuples { k, next: Some(vec![0; b]) })
}

/// Elements covered by exactly one of the given sets.
pub fn unique_union<T: Ord + Clone>(sets: &[BTreeSet<T>]) -> BTreeSet<T> {
    let mut cover: BTreeMap<&T, usize> = BTreeMap::new();
    for s in sets {
        for x in s {
            *cover.entry(x).or_insert(0) += 1;
        }
    }
    cover.into_iter().filter(|&(_, c)| c == 1).map(|(x, _)| x.clone()).collect()
}

/// A composition `b = (b_1, ..., b_H)` with prefix sums `B_0 = 0, ..., B_H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    parts: Vec<u32>,
    prefix: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        let mut prefix = Vec::with_capacity(parts.len() + 1);
        prefix.push(0);
        for &p in &parts {
            prefix.push(prefix.last().unwrap() + p);
        }
        Composition { parts, prefix }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `B_0, ..., B_H`.
    pub fn prefix_sums(&self) -> &[u32] {
        &self.prefix
    }

    pub fn total(&self) -> u32 {
        *self.prefix.last().unwrap()
    }

    /// `E_b(I)`: `0` for `I = 0`, otherwise the index `E` with
    /// `B_{E-1} < I <= B_E`.
    pub fn e_b(&self, i: u32) -> Result<usize> {
        if i > self.total() {
            return Err(Error::OutOfRange { value: i as u128, limit: self.total() as u128 });
        }
        if i == 0 {
            return Ok(0);
        }
        Ok(self.prefix.partition_point(|&b| b < i))
    }
}

fn check_cutoffs(y: &SetTuple, cutoffs: &[usize]) -> Result<()> {
    if cutoffs.len() != y.k() {
        return Err(Error::domain(format!("expected {} cutoffs, got {}", y.k(), cutoffs.len())));
    }
    if let Some(&bad) = cutoffs.iter().find(|&&c| c > y.b()) {
        return Err(Error::domain(format!("cutoff {bad} exceeds B = {}", y.b())));
    }
    Ok(())
}

/// `⋃_{r=j}^k (X_r ∩ (cutoff, B])` as an explicit set.
fn suffix_union_above(sets: &[BTreeSet<usize>], j: usize, cutoff: usize) -> BTreeSet<usize> {
    sets[j - 1..].iter().flat_map(|s| s.range(cutoff + 1..).copied()).collect()
}

/// `M_B(Y; I)` by enumerating every `Z` in `P_B` and testing the `k`
/// suffix-union equalities directly.
pub fn m_b_bruteforce(y: &SetTuple, cutoffs: &[usize], cap: u128) -> Result<u64> {
    check_cutoffs(y, cutoffs)?;
    let k = y.k();
    let ys = y.sets();
    let targets: Vec<BTreeSet<usize>> = (1..=k).map(|j| suffix_union_above(&ys, j, cutoffs[j - 1])).collect();
    let mut count = 0u64;
    for z in enumerate_set_tuples(y.b(), k, cap)? {
        let zs = z.sets();
        if (1..=k).all(|j| suffix_union_above(&zs, j, cutoffs[j - 1]) == targets[j - 1]) {
            count += 1;
        }
    }
    Ok(count)
}

/// Stable sort of `1..=k` by cutoff: `sigma[1..=k]`, padded with
/// `sigma(0) = 0` and `sigma(k+1) = k+1`.
fn sorting_permutation(cutoffs: &[usize]) -> Vec<usize> {
    let k = cutoffs.len();
    let mut idx: Vec<usize> = (1..=k).collect();
    idx.sort_by_key(|&j| cutoffs[j - 1]);
    let mut sigma = Vec::with_capacity(k + 2);
    sigma.push(0);
    sigma.extend(idx);
    sigma.push(k + 1);
    sigma
}

/// The pieces of the product formula for `M_B(Y; I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbFactors {
    /// `sigma(0), ..., sigma(k+1)`.
    pub sigma: Vec<usize>,
    /// `|N_i|` for `0 <= i <= k`.
    pub block_sizes: Vec<usize>,
    /// `v_{i, j+1}` for `0 <= j <= i`, per block `i`.
    pub gaps: Vec<Vec<u32>>,
    /// `w_{i, j}` for `0 <= j <= i`, per block `i`.
    pub weights: Vec<Vec<u32>>,
}

impl MbFactors {
    pub fn value(&self) -> u128 {
        self.gaps
            .iter()
            .zip(&self.weights)
            .flat_map(|(g, w)| g.iter().zip(w))
            .map(|(&v, &w)| (v as u128).pow(w))
            .product()
    }
}

/// Decomposes `M_B(Y; I)` following the block construction: the cutoffs
/// sorted by `sigma` split `{1..B}` into blocks `N_i = (I_{sigma(i)},
/// I_{sigma(i+1)}]`; on block `i` the sorted thresholds
/// `chi_i(0) < ... < chi_i(i+1)` (the values `0, sigma(1..=i), k+1`) group
/// labels into runs, an element of run `j` has `v_{i,j+1}` admissible labels,
/// and `w_{i,j}` elements of `Y` fall in run `j`.
pub fn m_b_factors(y: &SetTuple, cutoffs: &[usize]) -> Result<MbFactors> {
    check_cutoffs(y, cutoffs)?;
    let k = y.k();
    let b = y.b();
    let sigma = sorting_permutation(cutoffs);
    // I_0 = 0, I_{k+1} = B
    let cut = |s: usize| -> usize {
        if s == 0 {
            0
        } else if s == k + 1 {
            b
        } else {
            cutoffs[s - 1]
        }
    };

    let mut block_sizes = Vec::with_capacity(k + 1);
    let mut gaps = Vec::with_capacity(k + 1);
    let mut weights = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let (lo, hi) = (cut(sigma[i]), cut(sigma[i + 1]));
        let block: Vec<usize> = (lo + 1..=hi).collect();
        block_sizes.push(block.len());

        let mut chi: Vec<usize> = sigma[..=i].to_vec();
        chi.push(k + 1);
        chi.sort_unstable();

        let mut g = Vec::with_capacity(i + 1);
        let mut w = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let (from, to) = (chi[j], chi[j + 1]);
            g.push((to - from) as u32);
            // |W_{i,j}| = |⋃_{r=chi(j)}^{chi(j+1)-1} Y_{i,r}|
            let wij = block.iter().filter(|&&x| (from..to).contains(&y.label(x))).count();
            w.push(wij as u32);
        }
        gaps.push(g);
        weights.push(w);
    }
    Ok(MbFactors { sigma, block_sizes, gaps, weights })
}

/// `M_B(Y; I) = ∏_i ∏_j v_{i,j+1}^{w_{i,j}}`.
pub fn m_b_formula(y: &SetTuple, cutoffs: &[usize]) -> Result<u128> {
    Ok(m_b_factors(y, cutoffs)?.value())
}

/// `(j - 1 + (k - j + 2)^P) / (j + (k - j + 1)^P)` for `1 <= j <= k`.
pub fn lemma36_ratio(k: usize, j: usize, p: f64) -> f64 {
    let (k, j) = (k as f64, j as f64);
    (j - 1.0 + (k - j + 2.0).powf(p)) / (j + (k - j + 1.0).powf(p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma36 {
    pub lhs: f64,
    pub rhs: f64,
}

impl Lemma36 {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_tol)
    }
}

/// `lhs = Σ_{Y in P_B} M_B(Y; I)^{P-1}` against
/// `rhs = (k+1)^B ∏_j ratio_j^{I_{sigma(j)}}`.
pub fn lemma36_check(b: usize, k: usize, p: f64, cutoffs: &[usize], cap: u128) -> Result<Lemma36> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("P must exceed 1, got {p}")));
    }
    let mut lhs = 0.0;
    for y in enumerate_set_tuples(b, k, cap)? {
        lhs += (m_b_formula(&y, cutoffs)? as f64).powf(p - 1.0);
    }
    let sigma = sorting_permutation(cutoffs);
    let mut rhs = ((k + 1) as f64).powi(b as i32);
    for j in 1..=k {
        rhs *= lemma36_ratio(k, j, p).powi(cutoffs[sigma[j] - 1] as i32);
    }
    Ok(Lemma36 { lhs, rhs })
}

/// Minimum of `f(x) = (k+1)(rho^{P-1})^x + x - (x+1)^P - k` on a grid over
/// `[1, k-1]`, together with the endpoint values `f(0)` and `f(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma37Margin {
    pub k: u32,
    pub min_value: f64,
    pub argmin: f64,
    pub f0: f64,
    pub fk: f64,
}

pub const LEMMA37_GRID: usize = 10_000;

pub fn lemma37_f(c: &ModelConstants, x: f64) -> f64 {
    let k = c.k as f64;
    (k + 1.0) * c.rho_pow_p_minus_1().powf(x) + x - (x + 1.0).powf(c.p) - k
}

pub fn lemma37_margin(k: u32) -> Result<Lemma37Margin> {
    if k < 2 {
        return Err(Error::domain("the margin is only defined for k >= 2"));
    }
    let c = ModelConstants::new(k)?;
    let span = k as f64 - 2.0;
    let (mut min_value, mut argmin) = (f64::INFINITY, 1.0);
    for i in 0..LEMMA37_GRID {
        let x = 1.0 + span * i as f64 / (LEMMA37_GRID - 1) as f64;
        let v = lemma37_f(&c, x);
        if v < min_value {
            min_value = v;
            argmin = x;
        }
    }
    Ok(Lemma37Margin { k, min_value, argmin, f0: lemma37_f(&c, 0.0), fk: lemma37_f(&c, k as f64) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_set_tuples(2, 1, 100).unwrap().count(), 4);
        let b1: Vec<_> = enumerate_set_tuples(1, 2, 100).unwrap().map(|t| t.sets()).collect();
        assert_eq!(b1, vec![vec![set(&[]), set(&[])], vec![set(&[1]), set(&[])], vec![set(&[]), set(&[1])]]);
        assert_eq!(enumerate_set_tuples(3, 2, 100).unwrap().count(), 27);
        assert_eq!(enumerate_set_tuples(0, 3, 100).unwrap().count(), 1);
        assert!(enumerate_set_tuples(10, 2, 100).is_err());
    }

    #[test]
    fn unique_union_examples() {
        assert_eq!(unique_union(&[set(&[1, 2]), set(&[2, 3])]), set(&[1, 3]));
        assert_eq!(unique_union::<usize>(&[]), set(&[]));
        assert_eq!(unique_union(&[set(&[1]), set(&[1]), set(&[1])]), set(&[]));
    }

    #[test]
    fn e_b_examples() {
        let c = Composition::new(vec![2, 0, 1]);
        assert_eq!(c.prefix_sums(), &[0, 2, 2, 3]);
        assert_eq!(c.e_b(0).unwrap(), 0);
        assert_eq!(c.e_b(1).unwrap(), 1);
        assert_eq!(c.e_b(2).unwrap(), 1);
        assert_eq!(c.e_b(3).unwrap(), 3);
        assert!(c.e_b(4).is_err());
        assert_eq!(Composition::new(vec![1]).e_b(1).unwrap(), 1);
    }

    #[test]
    fn m_b_examples() {
        let y = SetTuple::from_sets(1, &[set(&[1])]).unwrap();
        assert_eq!(m_b_bruteforce(&y, &[0], 100).unwrap(), 1);
        assert_eq!(m_b_formula(&y, &[0]).unwrap(), 1);
        assert_eq!(m_b_bruteforce(&y, &[1], 100).unwrap(), 2);
        assert_eq!(m_b_formula(&y, &[1]).unwrap(), 2);
        let empty = SetTuple::from_sets(2, &[set(&[])]).unwrap();
        assert_eq!(m_b_bruteforce(&empty, &[0], 100).unwrap(), 1);
        assert_eq!(m_b_formula(&empty, &[0]).unwrap(), 1);
        let y3 = SetTuple::from_sets(3, &[set(&[1]), set(&[3])]).unwrap();
        assert_eq!(m_b_formula(&y3, &[3, 3]).unwrap(), 27);
        assert_eq!(m_b_bruteforce(&y3, &[3, 3], 100).unwrap(), 27);
    }

    #[test]
    fn set_tuple_validation() {
        assert!(SetTuple::from_sets(2, &[set(&[1]), set(&[1])]).is_err());
        assert!(SetTuple::from_sets(2, &[set(&[3])]).is_err());
        let y = SetTuple::from_sets(1, &[set(&[1])]).unwrap();
        assert!(m_b_formula(&y, &[2]).is_err());
        assert!(m_b_formula(&y, &[0, 0]).is_err());
    }

    #[test]
    fn permuted_moves_sets() {
        let y = SetTuple::from_sets(3, &[set(&[1]), set(&[2, 3])]).unwrap();
        let p = y.permuted(&[2, 1]).unwrap();
        assert_eq!(p.sets(), vec![set(&[2, 3]), set(&[1])]);
        assert!(y.permuted(&[1, 1]).is_err());
    }

    #[test]
    fn lemma36_examples() {
        let eq0 = lemma36_check(2, 1, 2.0, &[0], 100).unwrap();
        assert_eq!((eq0.lhs, eq0.rhs), (4.0, 4.0));
        let eq2 = lemma36_check(2, 1, 2.0, &[2], 100).unwrap();
        assert_eq!((eq2.lhs, eq2.rhs), (16.0, 16.0));
        let mid = lemma36_check(2, 1, 2.0, &[1], 100).unwrap();
        assert_eq!(mid.rhs, 8.0);
        assert!(mid.holds(1e-9));
    }

    #[test]
    fn lemma37_examples() {
        let m = lemma37_margin(2).unwrap();
        assert!((m.min_value - 0.136_451_465_682_788_7).abs() < 1e-12);
        assert_eq!(m.argmin, 1.0);
        assert!(m.f0.abs() < 1e-12);
        assert!(m.fk.abs() < 1e-9);
        assert!(lemma37_margin(1).is_err());
    }
}
