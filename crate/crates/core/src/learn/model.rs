use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Group, GroupElement, SiteSet};
use crate::learn::dataset::{build_dataset, term_classes, OrbitDataset, TargetSource, TermClass};
use crate::learn::{derive_seed, stable_hash};
use crate::learn::features::{rff_features, FeatureMap};
use crate::learn::lasso::{lasso_fit, LassoFit, LassoOptions};
use crate::learn::patch::{build_patch_layout, PatchLayout};
use crate::models::{ModelSpec, ObservableSpec};
use crate::quantum::pauli::LocalOperator;

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    /// Patch radius around each orbit representative.
    pub delta: usize,
    pub num_features: usize,
    pub gamma: f64,
    pub lambda_grid: Vec<f64>,
    pub folds: usize,
    pub lasso_tol: f64,
    pub lasso_max_iter: usize,
    /// Z-score patch values by their sampling ranges.
    pub standardize: bool,
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            delta: 2,
            num_features: 40,
            gamma: 1.0,
            lambda_grid: log_grid(1e-4, 1.0, 25),
            folds: 5,
            lasso_tol: 1e-8,
            lasso_max_iter: 20_000,
            standardize: false,
            seed: 0,
        }
    }
}

/// `f̂(O_I, ·)` for one orbit class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitModel {
    pub class: TermClass,
    pub layout: PatchLayout,
    pub feature_map: FeatureMap,
    pub weights: Vec<f64>,
    pub intercept: f64,
    /// Selected penalty; absent for a constant model.
    pub lambda: Option<f64>,
    /// `(λ, cross-validated MSE)` over the grid points whose fits converged.
    pub cv_curve: Vec<(f64, f64)>,
    pub cv_rmse: Option<f64>,
    pub nonzeros: usize,
    pub training_rows: usize,
    pub warnings: Vec<String>,
}

impl OrbitModel {
    pub fn key(&self) -> String {
        self.class.key()
    }

    pub fn norm_bound(&self) -> f64 {
        self.class.operator.norm_bound()
    }

    /// Unclipped affine prediction from a representative-ordered patch.
    pub fn evaluate_patch(&self, patch: &[f64]) -> Result<f64> {
        let phi = rff_features(patch, &self.feature_map)?;
        Ok(self.intercept + self.weights.iter().zip(&phi).map(|(w, f)| w * f).sum::<f64>())
    }
}

fn design(rows: &[Vec<f64>], map: &FeatureMap) -> Result<DMatrix<f64>> {
    let r = map.num_features();
    let mut m = DMatrix::zeros(rows.len(), r);
    for (i, p) in rows.iter().enumerate() {
        for (j, v) in rff_features(p, map)?.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn fit_subset(phi: &DMatrix<f64>, y: &[f64], idx: &[usize], opts: &LassoOptions) -> Result<LassoFit> {
    let sub = DMatrix::from_fn(idx.len(), phi.ncols(), |i, j| phi[(idx[i], j)]);
    let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    lasso_fit(&sub, &ys, opts)
}

/// Cross-validate λ over the configured grid, then refit on every row.
pub fn train_orbit_model(
    data: &OrbitDataset,
    class: &TermClass,
    layout: &PatchLayout,
    config: &LearnerConfig,
) -> Result<OrbitModel> {
    let rows = data.len();
    if rows == 0 {
        return Err(Error::InvalidArgument(format!("no training rows for {}", class.key())));
    }
    let salt = stable_hash(class.key());
    let feature_map = FeatureMap::new(
        config.num_features,
        layout.len(),
        config.gamma,
        derive_seed(config.seed, salt),
    );
    let mut warnings = Vec::new();
    if data.degenerate {
        warnings.push("training state flagged degenerate".to_string());
    }
    if rows == 1 {
        warnings.push("single training row: constant model".to_string());
        return Ok(OrbitModel {
            class: class.clone(),
            layout: layout.clone(),
            weights: vec![0.0; feature_map.num_features()],
            feature_map,
            intercept: data.targets[0],
            lambda: None,
            cv_curve: Vec::new(),
            cv_rmse: None,
            nonzeros: 0,
            training_rows: 1,
            warnings,
        });
    }
    if config.lambda_grid.is_empty() {
        return Err(Error::Config("empty lambda grid".into()));
    }
    let phi = design(&data.patches, &feature_map)?;
    let y = &data.targets;

    let folds = if rows < config.folds.max(2) {
        warnings.push(format!("{rows} rows < {} folds: leave-one-out", config.folds));
        rows
    } else {
        config.folds
    };
    let mut order: Vec<usize> = (0..rows).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(config.seed, salt ^ 1)));
    let mut fold_of = vec![0usize; rows];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % folds;
    }

    let base = LassoOptions {
        lambda: 0.0,
        tol: config.lasso_tol,
        max_iter: config.lasso_max_iter,
        fit_intercept: true,
    };
    let mut cv_curve = Vec::with_capacity(config.lambda_grid.len());
    for &lambda in &config.lambda_grid {
        let opts = LassoOptions { lambda, ..base };
        let mut sse = 0.0;
        for k in 0..folds {
            let train: Vec<usize> = (0..rows).filter(|&i| fold_of[i] != k).collect();
            let fit = match fit_subset(&phi, y, &train, &opts) {
                Ok(f) => f,
                Err(Error::LassoConvergence { .. }) => {
                    sse = f64::INFINITY;
                    warnings.push(format!("lambda {lambda:e} did not converge"));
                    break;
                }
                Err(e) => return Err(e),
            };
            for i in (0..rows).filter(|&i| fold_of[i] == k) {
                let row: Vec<f64> = phi.row(i).iter().copied().collect();
                sse += (fit.predict(&row) - y[i]).powi(2);
            }
        }
        if sse.is_finite() {
            cv_curve.push((lambda, sse / rows as f64));
        }
    }
    // largest λ among the minimizers first; later candidates only if the
    // full-data fit fails to converge
    let mut ranked: Vec<(f64, f64)> = cv_curve.iter().rev().copied().collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
    let all: Vec<usize> = (0..rows).collect();
    let mut chosen = None;
    let mut last_err = None;
    for &(lambda, mse) in &ranked {
        match fit_subset(&phi, y, &all, &LassoOptions { lambda, ..base }) {
            Ok(fit) => {
                chosen = Some((lambda, mse, fit));
                break;
            }
            Err(e @ Error::LassoConvergence { .. }) => {
                warnings.push(format!("full fit at lambda {lambda:e} did not converge"));
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    let (best_lambda, best_mse, fit) = chosen.ok_or_else(|| {
        last_err.unwrap_or(Error::LassoConvergence {
            iterations: config.lasso_max_iter,
            duality_gap: f64::NAN,
        })
    })?;
    Ok(OrbitModel {
        class: class.clone(),
        layout: layout.clone(),
        feature_map,
        nonzeros: fit.nonzeros(),
        weights: fit.weights,
        intercept: fit.intercept,
        lambda: Some(best_lambda),
        cv_curve,
        cv_rmse: Some(best_mse.sqrt()),
        training_rows: rows,
        warnings,
    })
}

/// `f̂(O_{gI}, x) := f̂(O_I, g·x)`, clipped to the operator-norm bound.
pub fn predict_term(model: &OrbitModel, spec: &ModelSpec, x: &[f64], g: &GroupElement) -> Result<f64> {
    spec.check_params(x)?;
    let patch = model.layout.extract(spec, x, g);
    let b = model.norm_bound();
    Ok(model.evaluate_patch(&patch)?.clamp(-b, b))
}

/// Every model trained from one ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub spec: ModelSpec,
    pub group: Group,
    pub config: LearnerConfig,
    pub source: String,
    pub models: Vec<OrbitModel>,
}

impl ModelBundle {
    pub fn model_for(&self, sites: &SiteSet, op: &LocalOperator) -> Option<&OrbitModel> {
        self.models
            .iter()
            .find(|m| &m.class.operator == op && m.class.orbit.member_of(sites).is_some())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Prediction for `op` on `sites`, averaged over every group element
    /// carrying the class representative onto `sites`. Returns the value
    /// and the number of model evaluations spent.
    pub fn predict_local(&self, sites: &SiteSet, op: &LocalOperator, x: &[f64]) -> Result<(f64, usize)> {
        let model = self.model_for(sites, op).ok_or_else(|| {
            Error::Config(format!("no model for {} on {sites}", op.label))
        })?;
        let gs = self.group.transporters(&model.class.orbit.representative, sites);
        let mut total = 0.0;
        for g in &gs {
            total += predict_term(model, &self.spec, x, g)?;
        }
        Ok((total / gs.len() as f64, gs.len()))
    }
}

/// Classes, layouts and datasets for every term of `obs`.
pub fn build_datasets(
    spec: &ModelSpec,
    x0: &[f64],
    group: &Group,
    obs: &ObservableSpec,
    source: TargetSource<'_>,
    degenerate: bool,
    config: &LearnerConfig,
) -> Result<Vec<(TermClass, PatchLayout, OrbitDataset)>> {
    let classes = term_classes(obs.terms.iter().map(|t| (&t.sites, &t.operator)), group)?;
    classes
        .into_iter()
        .map(|class| {
            let mut layout = build_patch_layout(spec, &class.orbit, config.delta);
            if config.standardize {
                layout = layout.standardized(spec);
            }
            let data = build_dataset(spec, x0, group, &class, &layout, source, degenerate)?;
            Ok((class, layout, data))
        })
        .collect()
}

/// Train one model per orbit class of the observable's terms, all from
/// the single parameter point `x0`.
pub fn train_models(
    spec: &ModelSpec,
    x0: &[f64],
    group: &Group,
    obs: &ObservableSpec,
    source: TargetSource<'_>,
    degenerate: bool,
    config: &LearnerConfig,
) -> Result<ModelBundle> {
    let sets = build_datasets(spec, x0, group, obs, source, degenerate, config)?;
    let models = sets
        .par_iter()
        .map(|(class, layout, data)| train_orbit_model(data, class, layout, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelBundle {
        spec: spec.clone(),
        group: group.clone(),
        config: config.clone(),
        source: source.tag().to_string(),
        models,
    })
}

/// `normalization · Σ_I α_I(x)·f̂(O_I, x)`; empty-support terms contribute
/// their coefficient directly.
pub fn predict_observable(bundle: &ModelBundle, x: &[f64], obs: &ObservableSpec) -> Result<f64> {
    predict_observable_counted(bundle, x, obs).map(|(v, _)| v)
}

/// As [`predict_observable`], also returning the number of model
/// evaluations performed.
pub fn predict_observable_counted(
    bundle: &ModelBundle,
    x: &[f64],
    obs: &ObservableSpec,
) -> Result<(f64, usize)> {
    bundle.spec.check_params(x)?;
    let mut total = 0.0;
    let mut evaluations = 0;
    for t in &obs.terms {
        let c = t.coefficient_at(x, Some(&bundle.spec))?;
        if t.sites.is_empty() {
            total += c * t.operator.strings.iter().map(|(k, _)| k).sum::<f64>();
            continue;
        }
        let (v, cost) = bundle.predict_local(&t.sites, &t.operator, x)?;
        evaluations += cost;
        total += c * v;
    }
    Ok((total * obs.normalization, evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_group;
    use crate::models::{energy_observable, heisenberg_ring, sample_params, ObservableTerm, TermCoefficient};
    use crate::quantum::{solve_model, LanczosOptions};

    fn toy_class() -> (TermClass, PatchLayout) {
        let spec = heisenberg_ring(6).unwrap();
        let g = build_group(6, true).unwrap();
        let class = term_classes(spec.terms.iter().map(|t| (&t.sites, &t.operator)), &g)
            .unwrap()
            .remove(0);
        let layout = build_patch_layout(&spec, &class.orbit, 1);
        (class, layout)
    }

    fn dataset(patches: Vec<Vec<f64>>, targets: Vec<f64>) -> OrbitDataset {
        OrbitDataset {
            class_key: "test".into(),
            group_rows: patches.len(),
            patches,
            targets,
            source: "exact".into(),
            degenerate: false,
        }
    }

    #[test]
    fn constant_targets_give_constant_model() {
        let (class, layout) = toy_class();
        let patches: Vec<Vec<f64>> = (0..12).map(|k| vec![k as f64 * 0.1, 0.5, 1.0 - k as f64 * 0.05]).collect();
        let m = train_orbit_model(&dataset(patches, vec![-0.7; 12]), &class, &layout, &LearnerConfig::default()).unwrap();
        assert!(m.weights.iter().all(|&w| w == 0.0));
        assert!((m.intercept + 0.7).abs() < 1e-12);
    }

    #[test]
    fn realizable_targets_fit_closely() {
        let (class, layout) = toy_class();
        let config = LearnerConfig { num_features: 10, lambda_grid: vec![1e-9, 1e-6, 1e-3], ..Default::default() };
        let map = FeatureMap::new(10, 3, config.gamma, derive_seed(config.seed, stable_hash(class.key())));
        let patches: Vec<Vec<f64>> = (0..40)
            .map(|k| vec![(k as f64 * 0.37).sin() + 1.0, (k as f64 * 0.11).cos() + 1.0, (k % 7) as f64 * 0.3])
            .collect();
        let truth: Vec<f64> = (0..10).map(|j| if j % 3 == 0 { 0.5 } else { -0.2 }).collect();
        let targets: Vec<f64> = patches
            .iter()
            .map(|p| rff_features(p, &map).unwrap().iter().zip(&truth).map(|(a, b)| a * b).sum::<f64>() + 0.1)
            .collect();
        let m = train_orbit_model(&dataset(patches.clone(), targets.clone()), &class, &layout, &config).unwrap();
        let mse: f64 = patches
            .iter()
            .zip(&targets)
            .map(|(p, t)| (m.evaluate_patch(p).unwrap() - t).powi(2))
            .sum::<f64>()
            / 40.0;
        assert!(mse <= 1e-6, "mse {mse}");
        assert_eq!(m.cv_curve.len(), 3);
    }

    #[test]
    fn few_rows_fall_back() {
        let (class, layout) = toy_class();
        let m = train_orbit_model(&dataset(vec![vec![0.1, 0.2, 0.3], vec![0.3, 0.2, 0.1], vec![1.0, 1.0, 1.0]], vec![0.1, 0.2, 0.3]), &class, &layout, &LearnerConfig::default()).unwrap();
        assert!(m.warnings.iter().any(|w| w.contains("leave-one-out")));
        let single = train_orbit_model(&dataset(vec![vec![0.1, 0.2, 0.3]], vec![0.4]), &class, &layout, &LearnerConfig::default()).unwrap();
        assert_eq!(single.intercept, 0.4);
        assert!(!single.warnings.is_empty());
    }

    #[test]
    fn bundle_prediction() {
        let spec = heisenberg_ring(8).unwrap();
        let group = build_group(8, true).unwrap();
        let x0 = sample_params(&spec, 17);
        let gs = solve_model(&spec, &x0, &LanczosOptions::default()).unwrap();
        let obs = energy_observable(&spec);
        let config = LearnerConfig::default();
        let bundle = train_models(&spec, &x0, &group, &obs, TargetSource::Exact(&gs.state), false, &config).unwrap();
        assert_eq!(bundle.models.len(), 1);

        // equivariance of the model holds by construction
        let x = sample_params(&spec, 18);
        let m = &bundle.models[0];
        for g in group.elements() {
            let gx = crate::models::act_on_params(g, &x, &spec).unwrap();
            let lhs = predict_term(m, &spec, &x, g).unwrap();
            let rhs = predict_term(m, &spec, &gx, &GroupElement::IDENTITY).unwrap();
            assert_eq!(lhs, rhs);
        }

        // in-sample energy
        let e = predict_observable(&bundle, &x0, &obs).unwrap();
        let exact = gs.energy / (8f64).sqrt();
        let train_rmse = m.cv_rmse.unwrap().max(1e-3);
        assert!((e - exact).abs() < 8.0 * train_rmse, "{e} vs {exact}");

        // bundle JSON round trip keeps predictions
        let back = ModelBundle::from_json(&bundle.to_json().unwrap()).unwrap();
        assert_eq!(predict_observable(&back, &x, &obs).unwrap(), predict_observable(&bundle, &x, &obs).unwrap());

        // constant identity term
        let id = ObservableSpec {
            terms: vec![ObservableTerm {
                sites: SiteSet::default(),
                operator: LocalOperator::identity(),
                coefficient: TermCoefficient::Constant { value: 2.5 },
            }],
            normalization: 1.0,
        };
        assert_eq!(predict_observable(&bundle, &x, &id).unwrap(), 2.5);

        let missing = crate::models::correlation_observable(0, 2).unwrap();
        assert!(matches!(predict_observable(&bundle, &x, &missing), Err(Error::Config(_))));
    }
}
