//! Least-squares fits of bound curves to measured errors, in log-error
//! space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::bounds::{error_bound_power_law, BoundCurve, BoundForm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    /// `d = None` searches `d ∈ 1..=MAX_SHORT_RANGE_D`.
    ShortRange { d: Option<u32> },
    PowerLaw { omega: f64, form: BoundForm },
}

pub const MAX_SHORT_RANGE_D: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub curve: BoundCurve,
    /// Root-mean-square residual of `ln ε`.
    pub rms_residual: f64,
}

fn log_residual_rms(curve: &BoundCurve, sizes: &[f64], log_err: &[f64]) -> Result<f64> {
    let mut ss = 0.0;
    for (&n, &y) in sizes.iter().zip(log_err) {
        let r = curve.evaluate(n)?.ln() - y;
        ss += r * r;
    }
    Ok((ss / sizes.len() as f64).sqrt())
}

fn fit_short_range_fixed(sizes: &[f64], log_err: &[f64], d: u32) -> Result<BoundFit> {
    // ln ε = −c·ln2·(log₂ n)^{1/d}: one-parameter linear least squares
    let a: Vec<f64> = sizes
        .iter()
        .map(|&n| -std::f64::consts::LN_2 * n.log2().powf(1.0 / d as f64))
        .collect();
    let num: f64 = a.iter().zip(log_err).map(|(a, y)| a * y).sum();
    let den: f64 = a.iter().map(|a| a * a).sum();
    let c = num / den;
    if !(c > 0.0) {
        return Err(Error::Fit(format!(
            "errors do not decrease with n (least-squares c = {c:.3e})"
        )));
    }
    let curve = BoundCurve::ShortRange { c, d };
    Ok(BoundFit {
        curve,
        rms_residual: log_residual_rms(&curve, sizes, log_err)?,
    })
}

fn exact_power_law_sse(ln_c: f64, omega: f64, sizes: &[f64], log_err: &[f64]) -> f64 {
    let c = ln_c.exp();
    sizes
        .iter()
        .zip(log_err)
        .map(|(&n, &y)| match error_bound_power_law(n, omega, c, BoundForm::Exact) {
            Ok(e) => (e.ln() - y).powi(2),
            Err(_) => f64::INFINITY,
        })
        .sum()
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    (a + b) / 2.0
}

fn fit_power_law(sizes: &[f64], log_err: &[f64], omega: f64, form: BoundForm) -> Result<BoundFit> {
    if !(omega > 0.0) {
        return Err(Error::Fit(format!("omega must be positive, got {omega}")));
    }
    let ln_c = match form {
        BoundForm::Asymptotic => {
            // ln ε = (ln c)/ω + g(n): the mean offset is the LS solution
            let mut acc = 0.0;
            for (&n, &y) in sizes.iter().zip(log_err) {
                let g = error_bound_power_law(n, omega, 1.0, BoundForm::Asymptotic)?.ln();
                acc += y - g;
            }
            omega * acc / sizes.len() as f64
        }
        BoundForm::Exact => {
            let sse = |u: f64| exact_power_law_sse(u, omega, sizes, log_err);
            let grid: Vec<f64> = (0..=240).map(|k| -30.0 + 0.25 * k as f64).collect();
            let (best, _) = grid
                .iter()
                .map(|&u| (u, sse(u)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty grid");
            golden_section(sse, best - 0.25, best + 0.25, 1e-12)
        }
    };
    let curve = BoundCurve::PowerLaw {
        c: ln_c.exp(),
        omega,
        form,
    };
    Ok(BoundFit {
        curve,
        rms_residual: log_residual_rms(&curve, sizes, log_err)?,
    })
}

/// Fit the free constants of `kind` to `(sizes, errors)`.
pub fn fit_bound(sizes: &[f64], errors: &[f64], kind: CurveKind) -> Result<BoundFit> {
    if sizes.len() != errors.len() {
        return Err(Error::Dimension {
            expected: sizes.len(),
            got: errors.len(),
        });
    }
    if sizes.len() < 2 {
        return Err(Error::Fit("need at least two data points".into()));
    }
    if sizes.iter().all(|&n| n == sizes[0]) {
        return Err(Error::Fit("all sizes are equal".into()));
    }
    if let Some(e) = errors.iter().find(|&&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::Fit(format!("errors must be positive and finite, got {e}")));
    }
    if let Some(n) = sizes.iter().find(|&&n| !(n >= 2.0)) {
        return Err(Error::Fit(format!("sizes must be at least 2, got {n}")));
    }
    let log_err: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    match kind {
        CurveKind::ShortRange { d: Some(d) } => fit_short_range_fixed(sizes, &log_err, d),
        CurveKind::ShortRange { d: None } => (1..=MAX_SHORT_RANGE_D)
            .filter_map(|d| fit_short_range_fixed(sizes, &log_err, d).ok())
            .min_by(|a, b| a.rms_residual.total_cmp(&b.rms_residual))
            .ok_or_else(|| Error::Fit("no short-range curve fits the data".into())),
        CurveKind::PowerLaw { omega, form } => fit_power_law(sizes, &log_err, omega, form),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::bounds::error_bound_short_range;

    const OMEGA: f64 = 864.0 / 83.0;

    #[test]
    fn recovers_short_range_constant() {
        let sizes: Vec<f64> = [8.0, 16.0, 32.0, 64.0, 128.0].to_vec();
        let errs: Vec<f64> = sizes
            .iter()
            .map(|&n| error_bound_short_range(n, 0.7, 2).unwrap())
            .collect();
        let fit = fit_bound(&sizes, &errs, CurveKind::ShortRange { d: Some(2) }).unwrap();
        match fit.curve {
            BoundCurve::ShortRange { c, d } => {
                assert!((c - 0.7).abs() < 1e-6);
                assert_eq!(d, 2);
            }
            _ => unreachable!(),
        }
        let free = fit_bound(&sizes, &errs, CurveKind::ShortRange { d: None }).unwrap();
        assert!(matches!(free.curve, BoundCurve::ShortRange { d: 2, .. }));
        assert!(free.rms_residual < 1e-9);
    }

    #[test]
    fn recovers_power_law_constant() {
        let sizes: Vec<f64> = [6.0, 8.0, 10.0, 12.0, 64.0, 128.0].to_vec();
        for c_true in [0.3, 1.0, 2.5] {
            let errs: Vec<f64> = sizes
                .iter()
                .map(|&n| error_bound_power_law(n, OMEGA, c_true, BoundForm::Exact).unwrap())
                .collect();
            let fit = fit_bound(&sizes, &errs, CurveKind::PowerLaw { omega: OMEGA, form: BoundForm::Exact }).unwrap();
            let BoundCurve::PowerLaw { c, .. } = fit.curve else { unreachable!() };
            assert!((c - c_true).abs() < 1e-4, "{c} vs {c_true}");

            let errs: Vec<f64> = sizes
                .iter()
                .map(|&n| error_bound_power_law(n, OMEGA, c_true, BoundForm::Asymptotic).unwrap())
                .collect();
            let fit = fit_bound(&sizes, &errs, CurveKind::PowerLaw { omega: OMEGA, form: BoundForm::Asymptotic }).unwrap();
            let BoundCurve::PowerLaw { c, .. } = fit.curve else { unreachable!() };
            assert!((c - c_true).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_degenerate_data() {
        let kind = CurveKind::ShortRange { d: Some(1) };
        assert!(matches!(fit_bound(&[8.0, 8.0], &[0.1, 0.2], kind), Err(Error::Fit(_))));
        assert!(matches!(fit_bound(&[8.0], &[0.1], kind), Err(Error::Fit(_))));
        assert!(matches!(fit_bound(&[8.0, 16.0], &[0.1, 0.0], kind), Err(Error::Fit(_))));
    }
}
