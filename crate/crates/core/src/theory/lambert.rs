use std::f64::consts::E;

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;

/// Principal branch `W₀(x)`, the solution of `w·eʷ = x` with `w ≥ −1`.
///
/// Halley iteration from a series guess near the branch point, `ln(1+x)`
/// for moderate arguments and `L₁ − L₂ + L₂/L₁` asymptotically.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x.is_nan() || x < BRANCH_POINT - 1e-15 {
        return Err(Error::Domain(format!("W(x) needs x >= -1/e, got {x}")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= BRANCH_POINT {
        return Ok(-1.0);
    }
    let mut w = if x < -0.25 {
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x <= 3.0 {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}
