//! Error bounds as functions of the system size `n`.
//!
//! Power-law interactions: solving `n = exp(c·ε^{−ω}·ln(1/ε))` for ε gives
//! `ε = (W(L)/L)^{1/ω}` with `L = (ω/c)·ln n`; the asymptotic form uses
//! `W(L) ≈ ln L` and reads `c^{1/ω}·(ln(ω ln n)/(ω ln n))^{1/ω}`.
//! Short-range interactions: `ε = 2^{−c·(log₂ n)^{1/d}}`.
//!
//! Logarithms are natural except in the short-range exponent; the fitted
//! constant `c` absorbs the base.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::lambert::lambert_w;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    /// Closed form through the Lambert W function.
    Exact,
    /// Leading asymptotic expansion of W.
    Asymptotic,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

pub fn error_bound_power_law(n: f64, omega: f64, c: f64, form: BoundForm) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("c", c)?;
    if !(n > 1.0) {
        return Err(Error::Domain(format!("need n > 1, got {n}")));
    }
    let ln_n = n.ln();
    match form {
        BoundForm::Exact => {
            let l = omega / c * ln_n;
            let w = lambert_w(l)?;
            Ok((w / l).powf(1.0 / omega))
        }
        BoundForm::Asymptotic => {
            let inner = omega * ln_n;
            if inner <= std::f64::consts::E {
                return Err(Error::Domain(format!(
                    "asymptotic form needs omega·ln n > e, got {inner}"
                )));
            }
            Ok(c.powf(1.0 / omega) * (inner.ln() / inner).powf(1.0 / omega))
        }
    }
}

/// `f(ε) = exp(c·ε^{−ω}·ln(1/ε))`, the sample count that reaches error ε.
pub fn power_law_sample_complexity(epsilon: f64, omega: f64, c: f64) -> f64 {
    (c * epsilon.powf(-omega) * (1.0 / epsilon).ln()).exp()
}

pub fn error_bound_short_range(n: f64, c: f64, d: u32) -> Result<f64> {
    check_positive("c", c)?;
    if !(n >= 2.0) {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    if d < 1 {
        return Err(Error::Domain("need d >= 1".into()));
    }
    Ok(2f64.powf(-c * n.log2().powf(1.0 / d as f64)))
}

/// A fully specified bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundCurve {
    ShortRange { c: f64, d: u32 },
    PowerLaw { c: f64, omega: f64, form: BoundForm },
}

impl BoundCurve {
    pub fn evaluate(&self, n: f64) -> Result<f64> {
        match *self {
            BoundCurve::ShortRange { c, d } => error_bound_short_range(n, c, d),
            BoundCurve::PowerLaw { c, omega, form } => error_bound_power_law(n, omega, c, form),
        }
    }
}
