use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

/// Constants attached to a dimension `k`.
///
/// * `rho = (k+1)^(1/k)`
/// * `p = min{2, s/(s-1)}` with `s = ((k+1) log rho)^2`
/// * `lambda = (k+1)^p / (k^p + 1)`
///
/// Evaluated with a 192-bit significand and rounded once to `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    pub k: u32,
    pub rho: f64,
    pub log_rho: f64,
    pub p: f64,
    pub lambda: f64,
}

const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

struct Ext(Consts);

impl Ext {
    fn new() -> Result<Self> {
        Consts::new().map(Ext).map_err(|e| Error::Domain(format!("extended precision setup: {e:?}")))
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.0)
    }

    fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PREC, RM, &mut self.0)
    }

    fn pow(&mut self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.pow(y, PREC, RM, &mut self.0)
    }
}

fn ext(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

// decimal rendering carries ~58 digits, so parsing rounds correctly
fn to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().unwrap_or(f64::NAN)
}

impl ModelConstants {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        let mut e = Ext::new()?;
        let kp1 = ext(k as f64 + 1.0);
        let log_rho = e.ln(&kp1).div(&ext(k as f64), PREC, RM);
        let rho = e.exp(&log_rho);
        let t = kp1.mul(&log_rho, PREC, RM);
        let s = t.mul(&t, PREC, RM);
        let ratio = s.div(&s.sub(&ext(1.0), PREC, RM), PREC, RM);
        let p = if ratio < ext(2.0) { ratio } else { ext(2.0) };
        let num = e.pow(&kp1, &p);
        let den = e.pow(&ext(k as f64), &p).add(&ext(1.0), PREC, RM);
        let lambda = num.div(&den, PREC, RM);
        Ok(ModelConstants { k, rho: to_f64(&rho), log_rho: to_f64(&log_rho), p: to_f64(&p), lambda: to_f64(&lambda) })
    }

    /// `rho^(p-1)`, the base that appears throughout the moment estimates.
    pub fn rho_pow_p_minus_1(&self) -> f64 {
        (self.log_rho * (self.p - 1.0)).exp()
    }

    /// Critical exponent `Q(1 / log rho)`.
    pub fn critical_exponent(&self) -> f64 {
        q_of(1.0 / self.log_rho).expect("1/log rho is positive")
    }
}

/// `Q(u) = u log u - u + 1`, evaluated in extended precision.
pub fn q_of(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain(format!("Q(u) needs u > 0, got {u}")));
    }
    let mut e = Ext::new()?;
    let x = ext(u);
    let v = x.mul(&e.ln(&x), PREC, RM).sub(&x, PREC, RM).add(&ext(1.0), PREC, RM);
    Ok(to_f64(&v))
}
