//! Ordered uniform samples: exact volumes of threshold simplices and Monte
//! Carlo volumes of the constrained regions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::ModelConstants;
use crate::error::{Error, Result};

/// Samples per independently seeded ChaCha stream.
pub const MC_BATCH: u64 = 4096;
pub const MIN_MC_SAMPLES: u64 = 1000;

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Lower thresholds `a_1 <= ... <= a_r`, clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdVector {
    a: Vec<BigRational>,
}

impl ThresholdVector {
    pub fn new(raw: Vec<BigRational>) -> Result<Self> {
        let (zero, one) = (BigRational::zero(), BigRational::one());
        let a: Vec<BigRational> = raw.into_iter().map(|x| x.clamp(zero.clone(), one.clone())).collect();
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("thresholds must be nondecreasing"));
        }
        Ok(ThresholdVector { a })
    }

    /// `a_i = (i - u)/v` for `1 <= i <= r`.
    pub fn from_uv(u: &BigRational, v: &BigRational, r: usize) -> Result<Self> {
        if !v.is_positive() {
            return Err(Error::domain("v must be positive"));
        }
        Self::new((1..=r).map(|i| (big(i as i64) - u) / v).collect())
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn thresholds(&self) -> &[BigRational] {
        &self.a
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.a.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect()
    }
}

/// Coefficients in increasing degree.
fn poly_eval(c: &[BigRational], t: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, x| acc * t + x)
}

/// `Vol{0 <= ξ_1 <= ... <= ξ_r <= 1 : ξ_i >= a_i}` by iterated integration.
pub fn simplex_volume_exact(t: &ThresholdVector) -> BigRational {
    let mut g = vec![BigRational::one()];
    for a in t.thresholds() {
        // antiderivative G with G(a) = 0
        let mut next = Vec::with_capacity(g.len() + 1);
        next.push(BigRational::zero());
        for (d, c) in g.iter().enumerate() {
            next.push(c / big(d as i64 + 1));
        }
        next[0] = -poly_eval(&next, a);
        g = next;
    }
    poly_eval(&g, &BigRational::one())
}

/// `Q_r(u, v) = r! Vol(S_r(u, v))`.
pub fn q_r(u: &BigRational, v: &BigRational, r: usize) -> Result<BigRational> {
    let t = ThresholdVector::from_uv(u, v, r)?;
    Ok(simplex_volume_exact(&t) * BigRational::from_integer(factorial(r)))
}

/// The regions whose volumes are estimated by sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionSpec {
    /// `ξ_{i+1} >= i/B` and `Σ_j λ^{j - Bξ_j} <= λ^N`.
    Yb { b: usize, n: f64, lambda: f64 },
    /// `μ^{vξ_1} + ... + μ^{vξ_j} >= μ^{j-γ}` for every `j`.
    Tmu { mu: f64, r: usize, v: f64, gamma: f64 },
    /// Integrand `(min_j ρ^{-j}(ρ^{vξ_1} + ... + ρ^{vξ_j} + 1))^k`.
    Ur { r: usize, v: f64, k: u32, rho: f64 },
    /// `ξ_i >= a_i`; used to compare sampling against exact volumes.
    Simplex { thresholds: Vec<f64> },
}

impl RegionSpec {
    pub fn dim(&self) -> usize {
        match self {
            RegionSpec::Yb { b, .. } => *b,
            RegionSpec::Tmu { r, .. } | RegionSpec::Ur { r, .. } => *r,
            RegionSpec::Simplex { thresholds } => thresholds.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            RegionSpec::Yb { b, n, lambda } => *b >= 1 && *n > 0.0 && *lambda > 1.0,
            RegionSpec::Tmu { mu, r, v, gamma } => *mu > 1.0 && *r >= 1 && *v > 0.0 && *gamma >= 0.0,
            RegionSpec::Ur { v, k, rho, .. } => *v > 0.0 && *k >= 1 && *rho > 1.0,
            RegionSpec::Simplex { thresholds } => thresholds.windows(2).all(|w| w[0] <= w[1]),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid region parameters: {self:?}")))
        }
    }

    /// Integrand at a sorted point.
    pub fn integrand(&self, xi: &[f64]) -> f64 {
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        match self {
            RegionSpec::Yb { b, n, lambda } => {
                let bf = *b as f64;
                let spaced = (1..*b).all(|i| xi[i] >= i as f64 / bf);
                let s: f64 = xi.iter().enumerate().map(|(j, x)| lambda.powf((j + 1) as f64 - bf * x)).sum();
                ind(spaced && s <= lambda.powf(*n))
            }
            RegionSpec::Tmu { mu, v, gamma, .. } => {
                let mut s = 0.0;
                let mut ok = true;
                for (j, x) in xi.iter().enumerate() {
                    s += mu.powf(v * x);
                    if s < mu.powf((j + 1) as f64 - gamma) {
                        ok = false;
                        break;
                    }
                }
                ind(ok)
            }
            RegionSpec::Ur { v, k, rho, .. } => {
                let mut s = 0.0;
                let mut best = 1.0f64;
                for (j, x) in xi.iter().enumerate() {
                    s += rho.powf(v * x);
                    best = best.min((s + 1.0) * rho.powi(-((j + 1) as i32)));
                }
                best.powi(*k as i32)
            }
            RegionSpec::Simplex { thresholds } => ind(xi.iter().zip(thresholds).all(|(x, a)| x >= a)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn within(&self, exact: f64, sigmas: f64) -> bool {
        (self.estimate - exact).abs() <= sigmas * self.stderr
    }
}

/// Average of the integrand over sorted i.i.d. uniform points, times the
/// ambient volume `1/r!`.
///
/// Batch `i` draws from ChaCha8 keyed by `seed` on stream `i`, and batch
/// sums are combined in batch order, so the result does not depend on the
/// thread count.
pub fn mc_region_volume(spec: &RegionSpec, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::domain(format!("need at least {MIN_MC_SAMPLES} samples, got {samples}")));
    }
    spec.validate()?;
    let dim = spec.dim();
    let scale = 1.0 / factorial_f64(dim);
    if dim == 0 {
        let v = spec.integrand(&[]);
        return Ok(McEstimate { estimate: v * scale, stderr: 0.0, samples, seed });
    }

    let batches = samples.div_ceil(MC_BATCH);
    let sums: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|bi| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(bi);
            let len = MC_BATCH.min(samples - bi * MC_BATCH);
            let mut xi = vec![0.0; dim];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                for x in xi.iter_mut() {
                    *x = rng.random::<f64>();
                }
                xi.sort_by(f64::total_cmp);
                let f = spec.integrand(&xi);
                s1 += f;
                s2 += f * f;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0);
    Ok(McEstimate { estimate: mean * scale, stderr: (var / n).sqrt() * scale, samples, seed })
}

/// One `(r, u)` instance of the exact lower bound
/// `Q_r(u, r + 1 - u) >= (u - 1/2)/(r + 1/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma51Row {
    pub r: usize,
    pub u: usize,
    pub q: BigRational,
    pub bound: BigRational,
    pub holds: bool,
}

/// Ratio `Q_r(u, v) r / ((u+1)(w+1))` with `w = u + v - r`; reported only.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma51Shape {
    pub r: usize,
    pub u: usize,
    pub v: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma51Report {
    pub rows: Vec<Lemma51Row>,
    pub shape: Vec<Lemma51Shape>,
}

impl Lemma51Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Lemma51Row> {
        self.rows.iter().filter(|r| !r.holds)
    }
}

pub const LEMMA51_MAX_R: usize = 12;

pub fn lemma51_check(r_max: usize) -> Result<Lemma51Report> {
    if r_max > LEMMA51_MAX_R {
        return Err(Error::Capacity { what: "lemma51 rMax", needed: r_max as u128, limit: LEMMA51_MAX_R as u128 });
    }
    let mut rows = Vec::new();
    let mut shape = Vec::new();
    for r in 1..=r_max {
        for u in 1..=r {
            let q = q_r(&big(u as i64), &big((r + 1 - u) as i64), r)?;
            let bound = big_ratio(2 * u as i64 - 1, 2 * r as i64 + 1);
            let holds = q >= bound;
            rows.push(Lemma51Row { r, u, q, bound, holds });
        }
        // w = u + v - r ranges over 0..=r for the shape table
        for u in 1..=r {
            for v in (r + 1 - u).max(1)..=r {
                let w = u + v - r;
                let q = q_r(&big(u as i64), &big(v as i64), r)?;
                let ratio = q.to_f64().unwrap_or(f64::NAN) * r as f64 / ((u + 1) * (w + 1)) as f64;
                shape.push(Lemma51Shape { r, u, v, ratio });
            }
        }
    }
    Ok(Lemma51Report { rows, shape })
}

/// `Vol(Y_B(N)) (B+1)!` against a floor, for one `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma310Row {
    pub b: usize,
    pub scaled: f64,
    pub scaled_stderr: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma310Report {
    pub k: u32,
    pub n: f64,
    pub lambda: f64,
    pub floor: f64,
    pub rows: Vec<Lemma310Row>,
}

impl Lemma310Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

pub const LEMMA310_MAX_B: usize = 10;

/// For `B = 1..=b_max`, checks `Vol(Y_B(N)) (B+1)! >= floor - 4 stderr`
/// with `λ` taken from the constants for `k`.
pub fn lemma310_check(b_max: usize, samples: u64, seed: u64, k: u32, n: f64, floor: f64) -> Result<Lemma310Report> {
    if b_max > LEMMA310_MAX_B {
        return Err(Error::Capacity { what: "lemma310 Bmax", needed: b_max as u128, limit: LEMMA310_MAX_B as u128 });
    }
    let lambda = ModelConstants::new(k)?.lambda;
    let mut rows = Vec::new();
    for b in 1..=b_max {
        let est = mc_region_volume(&RegionSpec::Yb { b, n, lambda }, samples, seed)?;
        let f = factorial_f64(b + 1);
        let (scaled, scaled_stderr) = (est.estimate * f, est.stderr * f);
        rows.push(Lemma310Row { b, scaled, scaled_stderr, holds: scaled >= floor - 4.0 * scaled_stderr });
    }
    Ok(Lemma310Report { k, n, lambda, floor, rows })
}

/// `(1 + |v - r|) / ((r+1)! ((k+1)^{r-v} + 1))`.
pub fn lemma44_bound(k: u32, r: usize, v: f64) -> f64 {
    let b = r as f64 - v;
    (1.0 + b.abs()) / (factorial_f64(r + 1) * ((k as f64 + 1.0).powf(b) + 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRow {
    pub r: usize,
    pub v: usize,
    /// Extra grid coordinate (`γ` for the `T_μ` envelope, zero otherwise).
    pub gamma: usize,
    pub estimate: McEstimate,
    pub bound: f64,
    pub ratio: f64,
    pub trivial_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub k: u32,
    pub ceiling: f64,
    pub rows: Vec<EnvelopeRow>,
}

impl EnvelopeReport {
    pub fn worst_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.trivial_ok && r.ratio <= self.ceiling)
    }
}

/// `U_r(v; k)` estimates over `0 <= r <= v_max`, `1 <= v <= v_max`, each
/// divided by the `(1 + |v - r|)/((r+1)!((k+1)^{r-v} + 1))` shape. Also
/// records whether `U_r <= 1/r! + 4 stderr`.
pub fn lemma44_trend(k: u32, v_max: usize, samples: u64, seed: u64, ceiling: f64) -> Result<EnvelopeReport> {
    let rho = ModelConstants::new(k)?.rho;
    let mut rows = Vec::new();
    for r in 0..=v_max {
        for v in 1..=v_max {
            let spec = RegionSpec::Ur { r, v: v as f64, k, rho };
            let estimate = mc_region_volume(&spec, samples, seed)?;
            let bound = lemma44_bound(k, r, v as f64);
            rows.push(EnvelopeRow {
                r,
                v,
                gamma: 0,
                estimate,
                bound,
                ratio: estimate.estimate / bound,
                trivial_ok: estimate.estimate <= 1.0 / factorial_f64(r) + 4.0 * estimate.stderr,
            });
        }
    }
    Ok(EnvelopeReport { k, ceiling, rows })
}

/// `Y = b` if `b >= γ + 1`, else `(γ - b + 1)(γ + 1)`, with `b = r - v`.
pub fn lemma53_y(r: usize, v: usize, gamma: usize) -> f64 {
    let (b, g) = (r as i64 - v as i64, gamma as i64);
    if b >= g + 1 {
        b as f64
    } else {
        ((g - b + 1) * (g + 1)) as f64
    }
}

/// `Vol(T_μ(r, v, γ)) μ^{μ^{b-γ}} (r+1)! / Y` over `1 <= r, v <= v_max`,
/// `0 <= γ <= gamma_max`, with `μ = ρ(k)`.
pub fn lemma53_check(
    k: u32,
    v_max: usize,
    gamma_max: usize,
    samples: u64,
    seed: u64,
    ceiling: f64,
) -> Result<EnvelopeReport> {
    let mu = ModelConstants::new(k)?.rho;
    let mut rows = Vec::new();
    for r in 1..=v_max {
        for v in 1..=v_max {
            for gamma in 0..=gamma_max {
                let spec = RegionSpec::Tmu { mu, r, v: v as f64, gamma: gamma as f64 };
                let estimate = mc_region_volume(&spec, samples, seed)?;
                let b = r as f64 - v as f64;
                // bound = Y / (μ^{μ^{b-γ}} (r+1)!), formed in logs
                let log_bound =
                    lemma53_y(r, v, gamma).ln() - mu.powf(b - gamma as f64) * mu.ln() - factorial_f64(r + 1).ln();
                let ratio = if estimate.estimate == 0.0 { 0.0 } else { (estimate.estimate.ln() - log_bound).exp() };
                rows.push(EnvelopeRow {
                    r,
                    v,
                    gamma,
                    estimate,
                    bound: log_bound.exp(),
                    ratio,
                    trivial_ok: estimate.estimate <= 1.0 / factorial_f64(r) + 4.0 * estimate.stderr,
                });
            }
        }
    }
    Ok(EnvelopeReport { k, ceiling, rows })
}
