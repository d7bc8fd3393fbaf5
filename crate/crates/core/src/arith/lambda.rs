//! Greedy partition of the primes into blocks of reciprocal sum `log rho`.
//!
//! Starting from `lambda_0 = (least prime >= k+1) - 1`, each `lambda_j` is the
//! largest prime for which the reciprocals of the primes in
//! `(lambda_{j-1}, lambda_j]` still sum to at most `log rho`. A block is only
//! emitted once the prime that would overflow it has been seen, so every
//! emitted block is provably maximal; the sequence simply ends when the prime
//! list runs out.

use crate::arith::{primes_up_to, ModelConstants};
use crate::error::Result;

/// Compensated (Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    /// The value the sum would have after adding `x`.
    pub fn peek_add(&self, x: f64) -> f64 {
        let mut probe = *self;
        probe.add(x);
        probe.value()
    }
}

#[derive(Debug, Clone)]
pub struct LambdaSeq {
    pub k: u32,
    pub prime_limit: u64,
    /// `lambda_0, lambda_1, ..., lambda_J`.
    pub lambdas: Vec<u64>,
    /// Reciprocal sum of block `D_j`, indexed from `j = 1` (element 0 is `D_1`).
    pub block_sums: Vec<f64>,
    /// The prime whose reciprocal would overflow block `D_j`.
    pub closing_primes: Vec<u64>,
    /// `mu_j = log log lambda_j / log rho` for `j >= 1`.
    pub mus: Vec<f64>,
    /// `mu_j - j` for `j >= 1`.
    pub empirical_drift: Vec<f64>,
    pub log_rho: f64,
}

impl LambdaSeq {
    /// Number of closed blocks `J`.
    pub fn len(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Primes of block `D_j = (lambda_{j-1}, lambda_j]`, for `1 <= j <= J`.
    pub fn block(&self, j: usize) -> Vec<u64> {
        assert!(j >= 1 && j <= self.len(), "block index {j} out of range");
        primes_up_to(self.lambdas[j]).into_iter().filter(|&p| p > self.lambdas[j - 1]).collect()
    }

    /// Block index `j` with `p` in `D_j`, if `p` is covered by a closed block.
    pub fn block_of(&self, p: u64) -> Option<usize> {
        (1..=self.len()).find(|&j| p > self.lambdas[j - 1] && p <= self.lambdas[j])
    }

    /// `ceil(max_j |mu_j - j|)` over the generated prefix.
    pub fn drift_bound(&self) -> Option<u64> {
        self.empirical_drift
            .iter()
            .map(|d| d.abs())
            .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))))
            .map(|m| m.ceil() as u64)
    }
}

pub fn lambda_sequence(k: u32, prime_limit: u64) -> Result<LambdaSeq> {
    let c = ModelConstants::new(k)?;
    let primes = primes_up_to(prime_limit);
    let lambda0 = primes.iter().copied().find(|&p| p > k as u64).map_or(k as u64, |p| p - 1);

    let mut lambdas = vec![lambda0];
    let mut block_sums = Vec::new();
    let mut closing_primes = Vec::new();
    let mut idx = primes.partition_point(|&p| p <= lambda0);

    loop {
        let mut acc = KahanSum::default();
        let start = idx;
        while idx < primes.len() && acc.peek_add(1.0 / primes[idx] as f64) <= c.log_rho {
            acc.add(1.0 / primes[idx] as f64);
            idx += 1;
        }
        // Ran out of primes before the block overflowed: it cannot be closed.
        if idx >= primes.len() || idx == start {
            break;
        }
        lambdas.push(primes[idx - 1]);
        block_sums.push(acc.value());
        closing_primes.push(primes[idx]);
    }

    let mus: Vec<f64> = lambdas[1..].iter().map(|&l| (l as f64).ln().ln() / c.log_rho).collect();
    let empirical_drift = mus.iter().enumerate().map(|(i, m)| m - (i + 1) as f64).collect();

    Ok(LambdaSeq { k, prime_limit, lambdas, block_sums, closing_primes, mus, empirical_drift, log_rho: c.log_rho })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let s1 = lambda_sequence(1, 100_000).unwrap();
        assert_eq!(&s1.lambdas[..3], &[1, 2, 7]);
        let s2 = lambda_sequence(2, 100_000).unwrap();
        assert_eq!(&s2.lambdas[..2], &[2, 5]);
    }

    #[test]
    fn truncated_sequence_is_valid() {
        // Only the first block fits below 10 for k = 1: {2}, closed by 3; the
        // block {3, 5, 7} is closed by 11 > 10 and therefore dropped.
        let s = lambda_sequence(1, 10).unwrap();
        assert_eq!(s.lambdas, vec![1, 2]);
        let s = lambda_sequence(1, 11).unwrap();
        assert_eq!(s.lambdas, vec![1, 2, 7]);
        assert_eq!(s.closing_primes, vec![3, 11]);
    }

    #[test]
    fn blocks_partition_primes() {
        let s = lambda_sequence(2, 1_000_000).unwrap();
        let mut seen = Vec::new();
        for j in 1..=s.len() {
            seen.extend(s.block(j));
        }
        let expect: Vec<u64> =
            primes_up_to(*s.lambdas.last().unwrap()).into_iter().filter(|&p| p > s.lambdas[0]).collect();
        assert_eq!(seen, expect);
        assert_eq!(s.block_of(3), Some(1));
        assert_eq!(s.block_of(2), None);
    }

    #[test]
    fn kahan_is_exact_on_repeated_tenths() {
        let mut k = KahanSum::default();
        for _ in 0..10 {
            k.add(0.1);
        }
        assert_eq!(k.value(), 1.0);
    }
}
