//! `min_{w,b} (1/2N)‖y − Φw − b‖² + λ‖w‖₁` by cyclic coordinate descent
//! with covariance (Gram) updates.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LassoOptions {
    pub lambda: f64,
    /// Stop once the largest coordinate change in a sweep is below this.
    pub tol: f64,
    pub max_iter: usize,
    pub fit_intercept: bool,
}

impl Default for LassoOptions {
    fn default() -> Self {
        LassoOptions {
            lambda: 1e-3,
            tol: 1e-8,
            max_iter: 20_000,
            fit_intercept: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoFit {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub iterations: usize,
    pub duality_gap: f64,
}

impl LassoFit {
    pub fn predict(&self, features: &[f64]) -> f64 {
        self.intercept
            + self
                .weights
                .iter()
                .zip(features)
                .map(|(w, f)| w * f)
                .sum::<f64>()
    }

    pub fn nonzeros(&self) -> usize {
        self.weights.iter().filter(|&&w| w != 0.0).count()
    }
}

#[inline]
pub fn soft_threshold(z: f64, lambda: f64) -> f64 {
    if z > lambda {
        z - lambda
    } else if z < -lambda {
        z + lambda
    } else {
        0.0
    }
}

struct Centered {
    x: DMatrix<f64>,
    y: DVector<f64>,
    x_mean: DVector<f64>,
    y_mean: f64,
}

fn center(features: &DMatrix<f64>, targets: &[f64], fit_intercept: bool) -> Centered {
    let (rows, cols) = features.shape();
    let y = DVector::from_column_slice(targets);
    if !fit_intercept {
        return Centered {
            x: features.clone(),
            y,
            x_mean: DVector::zeros(cols),
            y_mean: 0.0,
        };
    }
    let x_mean = DVector::from_iterator(cols, features.column_iter().map(|c| c.mean()));
    let y_mean = y.mean();
    let mut x = features.clone();
    for j in 0..cols {
        for i in 0..rows {
            x[(i, j)] -= x_mean[j];
        }
    }
    Centered {
        x,
        y: y.add_scalar(-y_mean),
        x_mean,
        y_mean,
    }
}

fn duality_gap(c: &Centered, w: &DVector<f64>, lambda: f64) -> f64 {
    let n = c.y.len() as f64;
    let r = &c.y - &c.x * w;
    let primal = r.norm_squared() / (2.0 * n) + lambda * w.abs().sum();
    let corr = (c.x.transpose() * &r).amax() / n;
    let s = if corr > lambda && corr > 0.0 { lambda / corr } else { 1.0 };
    // θ = s·r/N is dual feasible
    let theta = &r * (s / n);
    let dual = c.y.norm_squared() / (2.0 * n) - n / 2.0 * (&theta - &c.y / n).norm_squared();
    (primal - dual).max(0.0)
}

pub fn lasso_fit(features: &DMatrix<f64>, targets: &[f64], opts: &LassoOptions) -> Result<LassoFit> {
    let (rows, cols) = features.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "lasso needs a non-empty design, got {rows}x{cols}"
        )));
    }
    if targets.len() != rows {
        return Err(Error::Dimension {
            expected: rows,
            got: targets.len(),
        });
    }
    if !(opts.lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {}", opts.lambda)));
    }
    let c = center(features, targets, opts.fit_intercept);
    let n = rows as f64;
    let gram = c.x.transpose() * &c.x / n;
    let q = c.x.transpose() * &c.y / n;
    let mut w = DVector::<f64>::zeros(cols);
    // gw = G·w, kept in sync with w
    let mut gw = DVector::<f64>::zeros(cols);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut max_change = 0.0f64;
        for j in 0..cols {
            let gjj = gram[(j, j)];
            if gjj <= 1e-300 {
                continue;
            }
            let old = w[j];
            let rho = q[j] - gw[j] + gjj * old;
            let new = soft_threshold(rho, opts.lambda) / gjj;
            let delta = new - old;
            if delta != 0.0 {
                w[j] = new;
                gw.axpy(delta, &gram.column(j), 1.0);
                max_change = max_change.max(delta.abs());
            }
        }
        if max_change <= opts.tol {
            converged = true;
            break;
        }
    }
    let gap = duality_gap(&c, &w, opts.lambda);
    if !converged {
        return Err(Error::LassoConvergence {
            iterations,
            duality_gap: gap,
        });
    }
    let intercept = if opts.fit_intercept { c.y_mean - c.x_mean.dot(&w) } else { 0.0 };
    Ok(LassoFit {
        weights: w.iter().copied().collect(),
        intercept,
        iterations,
        duality_gap: gap,
    })
}
