use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime-power decomposition of a positive integer.
///
/// Primes are strictly increasing and every exponent is at least one; the
/// empty list represents `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub(crate) fn from_sorted(n: u64, factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization { n, factors }
    }

    /// Build from an explicit list of prime powers (primes must be distinct).
    pub fn from_prime_powers(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable();
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("repeated prime in factorization"));
        }
        let mut n: u64 = 1;
        for &(p, e) in &factors {
            for _ in 0..e {
                n = n.checked_mul(p).ok_or(Error::Overflow("factorization product"))?;
            }
        }
        Ok(Factorization { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Number of distinct prime factors exceeding `k`.
    pub fn omega_above(&self, k: u64) -> usize {
        self.factors.iter().filter(|&&(p, _)| p > k).count()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Largest prime factor, `None` for `n = 1`.
    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    /// The distinct primes of `n`, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Euler's totient.
    pub fn phi(&self) -> u64 {
        self.factors.iter().fold(self.n, |acc, &(p, _)| acc / p * (p - 1))
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of ordered `k`-tuples `(d_1, ..., d_k)` with `d_1 ⋯ d_k | n`,
    /// i.e. the `(k+1)`-fold divisor function: `∏ C(e + k, k)`.
    pub fn tau_multi(&self, k: u32) -> Result<u128> {
        let mut total: u128 = 1;
        for &(_, e) in &self.factors {
            total =
                total.checked_mul(binomial(e as u128 + k as u128, k as u128)?).ok_or(Error::Overflow("tau_multi"))?;
        }
        Ok(total)
    }

    /// Exponent of `p` in `n` (zero when `p` does not divide `n`).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

/// `C(n, r)` with checked 128-bit arithmetic.
pub fn binomial(n: u128, r: u128) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        let num = acc.checked_mul(n - i).ok_or(Error::Overflow("binomial"))?;
        acc = num / (i + 1);
    }
    Ok(acc)
}

/// `gcd(a, b)` on 64-bit integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SieveTable;

    #[test]
    fn factor_examples() {
        let s = SieveTable::new(40_000).unwrap();
        assert_eq!(s.factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert!(s.factorize(1).unwrap().factors().is_empty());
        assert_eq!(s.factorize(30030).unwrap().factors(), &[(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1)]);
    }

    #[test]
    fn divisor_examples() {
        let s = SieveTable::new(100).unwrap();
        assert_eq!(s.factorize(12).unwrap().divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(s.factorize(1).unwrap().divisors(), vec![1]);
        assert_eq!(s.factorize(36).unwrap().divisors().len(), 9);
    }

    #[test]
    fn tau_multi_examples() {
        let s = SieveTable::new(100).unwrap();
        assert_eq!(s.factorize(6).unwrap().tau_multi(2).unwrap(), 9);
        assert_eq!(s.factorize(4).unwrap().tau_multi(2).unwrap(), 6);
        for k in 1..6 {
            assert_eq!(s.factorize(1).unwrap().tau_multi(k).unwrap(), 1);
        }
    }

    #[test]
    fn tau_multi_overflow_is_reported() {
        let f = Factorization::from_prime_powers(vec![(2, 60)]).unwrap();
        assert!(f.tau_multi(40).is_ok());
        let big = Factorization::from_prime_powers(vec![(2, 63)]).unwrap();
        assert_eq!(big.tau_multi(200), Err(Error::Overflow("binomial")));
    }

    #[test]
    fn phi_and_omega() {
        let s = SieveTable::new(1000).unwrap();
        let f = s.factorize(360).unwrap();
        assert_eq!(f.phi(), 96);
        assert_eq!(f.omega(), 3);
        assert_eq!(f.omega_above(2), 2);
        assert!(!f.is_squarefree());
        assert_eq!(f.largest_prime(), Some(5));
        assert_eq!(s.factorize(1).unwrap().phi(), 1);
    }
}
