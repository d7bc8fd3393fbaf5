use crate::arith::Factorization;
use crate::error::{Error, Result};

/// Default ceiling on the bytes a sieve table may occupy (512 MiB).
pub const DEFAULT_MEMORY_CAP: u64 = 512 << 20;

/// Smallest-prime-factor table for `2..=limit`.
///
/// Built once by a linear sieve; afterwards it is immutable and can be shared
/// freely between threads.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SieveTable {
    /// Sieve up to `limit` under the default memory cap.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_memory_cap(limit, DEFAULT_MEMORY_CAP)
    }

    pub fn with_memory_cap(limit: u64, memory_cap: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::Capacity { what: "sieve limit", needed: limit as u128, limit: u32::MAX as u128 - 1 });
        }
        let bytes = (limit + 1) * std::mem::size_of::<u32>() as u64;
        if bytes > memory_cap {
            return Err(Error::Capacity {
                what: "sieve table bytes",
                needed: bytes as u128,
                limit: memory_cap as u128,
            });
        }

        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(SieveTable { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.spf(n) == Some(n)
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Factor `n` by repeated smallest-prime-factor lookups. `n = 1` yields the
    /// empty factorization.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.limit {
            return Err(Error::OutOfRange { value: n as u128, limit: self.limit as u128 });
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization::from_sorted(n, factors))
    }

    /// Returns an error unless `n` is covered by this table.
    pub fn ensure_covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::OutOfRange { value: n as u128, limit: self.limit as u128 })
        } else {
            Ok(())
        }
    }
}

/// Plain sieve of Eratosthenes returning the primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_spf_values() {
        let s = SieveTable::new(10).unwrap();
        assert_eq!(s.spf(9), Some(3));
        assert_eq!(s.spf(10), Some(2));
        assert_eq!(SieveTable::new(2).unwrap().spf(2), Some(2));
        assert_eq!(SieveTable::new(49).unwrap().spf(49), Some(7));
    }

    #[test]
    fn spf_invariants() {
        let s = SieveTable::new(20_000).unwrap();
        for n in 2..=20_000u64 {
            let p = s.spf(n).unwrap();
            assert_eq!(n % p, 0);
            assert!(s.is_prime(p));
            assert!((2..p).all(|q| n % q != 0));
        }
    }

    #[test]
    fn capacity_and_range_errors() {
        assert!(matches!(SieveTable::with_memory_cap(1_000_000, 1024), Err(Error::Capacity { .. })));
        assert!(matches!(SieveTable::new(1), Err(Error::Domain(_))));
        let s = SieveTable::new(100).unwrap();
        assert!(matches!(s.factorize(101), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn prime_lists_agree() {
        let s = SieveTable::new(5000).unwrap();
        let a: Vec<u64> = s.primes().iter().map(|&p| p as u64).collect();
        assert_eq!(a, primes_up_to(5000));
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
    }
}
