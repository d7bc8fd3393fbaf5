//! Sieving, factorization, divisor machinery and the per-`k` constants.

mod constants;
mod factor;
mod lambda;
mod sieve;

pub use constants::{q_of, ModelConstants};
pub use factor::{binomial, gcd, Factorization};
pub use lambda::{lambda_sequence, KahanSum, LambdaSeq};
pub use sieve::{primes_up_to, SieveTable, DEFAULT_MEMORY_CAP};
