//! Sums of Farey fractions modulo one, counted two ways.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Default ceiling on the number of tuples either route may enumerate.
pub const DEFAULT_FAREY_CAP: u128 = 10_000_000;

/// A residue class in `Q/Z`, kept in lowest terms with `0 <= num < den`.
/// Zero is `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedFraction {
    num: u64,
    den: u64,
}

impl ReducedFraction {
    pub const ZERO: ReducedFraction = ReducedFraction { num: 0, den: 1 };

    /// `num/den mod 1` in lowest terms.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        let num = num % den;
        let g = gcd(num, den);
        Ok(ReducedFraction { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Sum modulo one, normalized after the addition.
    pub fn add_mod1(self, other: Self) -> Result<Self> {
        let g = gcd(self.den, other.den);
        let l = (self.den / g).checked_mul(other.den).ok_or(Error::Overflow("Farey denominator"))?;
        let a = self.num * (l / self.den);
        let b = other.num * (l / other.den);
        ReducedFraction::new((a + b) % l, l)
    }
}

/// The Farey fractions `b/r` with `1 <= b <= r <= R` and `gcd(b, r) = 1`,
/// read modulo one (so `1/1` becomes `0`).
pub fn farey_fractions(order: u64) -> Vec<ReducedFraction> {
    let mut out = Vec::new();
    for r in 1..=order {
        for b in 1..=r {
            if gcd(b, r) == 1 {
                out.push(ReducedFraction::new(b, r).expect("r >= 1"));
            }
        }
    }
    out
}

/// `|F_R(kp1)|` by literal enumeration of all `kp1`-tuples of Farey
/// fractions of order `R`.
pub fn farey_count_direct(kp1: usize, order: u64, cap: u128) -> Result<u64> {
    Ok(farey_set_direct(kp1, order, cap)?.len() as u64)
}

/// The set `F_R(kp1)` itself, sorted.
pub fn farey_set_direct(kp1: usize, order: u64, cap: u128) -> Result<Vec<ReducedFraction>> {
    if kp1 < 1 || order < 1 {
        return Err(Error::domain("farey needs kp1 >= 1 and R >= 1"));
    }
    let fr = farey_fractions(order);
    let tuples = (fr.len() as u128).checked_pow(kp1 as u32).ok_or(Error::Overflow("Farey tuple count"))?;
    if tuples > cap {
        return Err(Error::Capacity { what: "Farey tuples", needed: tuples, limit: cap });
    }

    fn go(fr: &[ReducedFraction], acc: ReducedFraction, left: usize, out: &mut HashSet<ReducedFraction>) -> Result<()> {
        if left == 0 {
            out.insert(acc);
            return Ok(());
        }
        for &f in fr {
            go(fr, acc.add_mod1(f)?, left - 1, out)?;
        }
        Ok(())
    }

    let parts: Vec<Result<HashSet<ReducedFraction>>> = fr
        .par_iter()
        .map(|&first| {
            let mut s = HashSet::new();
            go(&fr, first, kp1 - 1, &mut s)?;
            Ok(s)
        })
        .collect();
    let mut all = BTreeSet::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all.into_iter().collect())
}

/// Admissible denominators `r = r_1 ⋯ r_kp1` with `r_i <= R` pairwise
/// coprime, each mapped to `phi(r)`.
pub fn admissible_denominators(kp1: usize, order: u64, cap: u128) -> Result<BTreeMap<u64, u64>> {
    if kp1 < 1 || order < 1 {
        return Err(Error::domain("farey needs kp1 >= 1 and R >= 1"));
    }
    let tuples = (order as u128).checked_pow(kp1 as u32).ok_or(Error::Overflow("denominator tuple count"))?;
    if tuples > cap {
        return Err(Error::Capacity { what: "denominator tuples", needed: tuples, limit: cap });
    }
    let phi: Vec<u64> = (0..=order).map(totient).collect();

    // nondecreasing r_1 <= ... <= r_kp1; coprimality makes phi multiplicative
    fn go(
        order: u64,
        phi: &[u64],
        start: u64,
        left: usize,
        prod: u64,
        phi_prod: u64,
        chosen: &mut Vec<u64>,
        out: &mut BTreeMap<u64, u64>,
    ) {
        if left == 0 {
            out.insert(prod, phi_prod);
            return;
        }
        for r in start..=order {
            if chosen.iter().all(|&c| gcd(c, r) == 1) {
                chosen.push(r);
                go(order, phi, r, left - 1, prod * r, phi_prod * phi[r as usize], chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    go(order, &phi, 1, kp1, 1, 1, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `|F_R(kp1)|` as `Σ phi(r)` over admissible denominators.
pub fn farey_count_characterized(kp1: usize, order: u64, cap: u128) -> Result<u64> {
    Ok(admissible_denominators(kp1, order, cap)?.values().sum())
}

/// Euler's totient by trial division (used on small arguments only).
pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out = out / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        out = out / m * (m - 1);
    }
    out
}
