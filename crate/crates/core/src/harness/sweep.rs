use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, SourceConfig, Target};
use crate::lattice::{build_group, ring_distance};
use crate::learn::{derive_seed, predict_observable, train_models, TargetSource};
use crate::models::{
    all_correlations_observable, correlation_observable, energy_observable, sample_params,
    sample_params_with, ObservableSpec,
};
use crate::quantum::{expectation_observable, solve_model};
use crate::shadows::{measure_shadow, shadow_count, DEFAULT_SHADOW_CONSTANT};

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub target: String,
    /// Ring distance for correlation rows.
    pub distance: Option<usize>,
    pub ml_rmse: f64,
    pub trivial_rmse: f64,
    pub test_std: f64,
    pub wall_ms: Option<f64>,
}

/// Bookkeeping for one `(n, seed)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMeta {
    pub n: usize,
    pub seed: u64,
    /// Ground-state solves feeding the learner. Always one.
    pub training_solves: usize,
    /// Oracle solves at test points, used only for scoring.
    pub test_solves: usize,
    pub skipped_points: usize,
    pub model_count: usize,
    pub training_degenerate: bool,
    pub snapshots: Option<usize>,
    pub solve_ms: f64,
    pub train_ms: f64,
    pub score_ms: f64,
    pub wall_ms: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub cells: Vec<CellMeta>,
}

pub(crate) fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

impl SweepResult {
    pub fn rows_for(&self, n: usize, distance: Option<usize>) -> impl Iterator<Item = &ResultRow> {
        self.rows
            .iter()
            .filter(move |r| r.n == n && r.distance == distance)
    }

    /// Median over seeds of the ML RMSE.
    pub fn median_ml_rmse(&self, n: usize, distance: Option<usize>) -> Option<f64> {
        median(&mut self.rows_for(n, distance).map(|r| r.ml_rmse).collect::<Vec<_>>())
    }

    pub fn median_trivial_rmse(&self, n: usize, distance: Option<usize>) -> Option<f64> {
        median(&mut self.rows_for(n, distance).map(|r| r.trivial_rmse).collect::<Vec<_>>())
    }

    pub fn median_test_std(&self, n: usize, distance: Option<usize>) -> Option<f64> {
        median(&mut self.rows_for(n, distance).map(|r| r.test_std).collect::<Vec<_>>())
    }

    /// Distinct `(n, distance)` groups in row order.
    pub fn groups(&self) -> Vec<(usize, Option<usize>)> {
        let mut out: Vec<(usize, Option<usize>)> = Vec::new();
        for r in &self.rows {
            if !out.contains(&(r.n, r.distance)) {
                out.push((r.n, r.distance));
            }
        }
        out
    }
}

struct Quantity {
    distance: Option<usize>,
    obs: ObservableSpec,
}

fn correlation_quantities(n: usize) -> Result<Vec<Quantity>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Quantity {
                distance: Some(ring_distance(i, j, n)),
                obs: correlation_observable(i, j)?,
            });
        }
    }
    Ok(out)
}

type Paired = (Vec<f64>, Vec<f64>, Vec<f64>);

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

fn rmse(a: &[f64], b: &[f64]) -> f64 {
    let ss: f64 = a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum();
    (ss / a.len() as f64).sqrt()
}

fn run_cell(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<(Vec<ResultRow>, CellMeta)> {
    let start = Instant::now();
    let spec = cfg.model(n)?;
    let group = build_group(n, cfg.include_reflections)?;
    let master = derive_seed(seed, n as u64);
    let mut warnings = Vec::new();

    let x0 = sample_params(&spec, derive_seed(master, 1));
    let t = Instant::now();
    let gs0 = solve_model(&spec, &x0, &cfg.lanczos.with_seed(derive_seed(master, 2)))?;
    let solve_ms = ms(t);
    if gs0.degenerate {
        warnings.push(format!("training state degenerate (gap {:.3e})", gs0.gap_estimate));
    }

    let (train_obs, quantities) = match cfg.target {
        Target::Energy => {
            let obs = energy_observable(&spec);
            (obs.clone(), vec![Quantity { distance: None, obs }])
        }
        Target::AllCorrelations => (all_correlations_observable(n)?, correlation_quantities(n)?),
    };

    let record = match cfg.source {
        SourceConfig::Exact => None,
        SourceConfig::Shadow { constant, snapshots } => {
            let t = snapshots
                .unwrap_or_else(|| shadow_count(n, constant.unwrap_or(DEFAULT_SHADOW_CONSTANT)));
            Some(measure_shadow(&gs0.state, t, derive_seed(master, 3))?)
        }
    };
    let source = match &record {
        None => TargetSource::Exact(&gs0.state),
        Some(r) => TargetSource::Shadow(r),
    };

    let learner = crate::learn::LearnerConfig {
        seed: derive_seed(cfg.learner.seed ^ master, 4),
        ..cfg.learner.clone()
    };
    let t = Instant::now();
    let bundle = train_models(&spec, &x0, &group, &train_obs, source, gs0.degenerate, &learner)?;
    let train_ms = ms(t);
    for m in &bundle.models {
        warnings.extend(m.warnings.iter().map(|w| format!("{}: {w}", m.key())));
    }

    // the trivial predictor repeats the training sample's value
    let trivial: Vec<f64> = quantities
        .iter()
        .map(|q| {
            let mut v = 0.0;
            for term in &q.obs.terms {
                let c = term.coefficient_at(&x0, Some(&spec))?;
                v += c * if term.sites.is_empty() {
                    term.operator.strings.iter().map(|(k, _)| k).sum::<f64>()
                } else {
                    source.target(&term.sites, &term.operator)?
                };
            }
            Ok(v * q.obs.normalization)
        })
        .collect::<Result<_>>()?;

    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master, 5));
    let mut pred: Vec<Vec<f64>> = vec![Vec::new(); quantities.len()];
    let mut exact: Vec<Vec<f64>> = vec![Vec::new(); quantities.len()];
    let mut skipped = 0;
    let mut test_solves = 0;
    for k in 0..cfg.test_points {
        let x = sample_params_with(&spec, &mut rng);
        let opts = cfg.lanczos.with_seed(derive_seed(master, 100 + k as u64));
        test_solves += 1;
        let gs = match solve_model(&spec, &x, &opts) {
            Ok(gs) if !gs.degenerate => gs,
            Ok(gs) => {
                warnings.push(format!("test point {k} skipped: gap {:.3e}", gs.gap_estimate));
                skipped += 1;
                continue;
            }
            Err(e @ Error::Convergence { .. }) => {
                warnings.push(format!("test point {k} skipped: {e}"));
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for (q, quantity) in quantities.iter().enumerate() {
            exact[q].push(expectation_observable(&gs.state, &quantity.obs, &x, Some(&spec))?);
            pred[q].push(predict_observable(&bundle, &x, &quantity.obs)?);
        }
    }
    let score_ms = ms(t);
    if skipped as f64 > cfg.max_skip_fraction * cfg.test_points as f64 {
        return Err(Error::Sweep(format!(
            "n = {n}, seed = {seed}: {skipped} of {} test points degenerate or unconverged",
            cfg.test_points
        )));
    }

    // distance -> (predicted, exact, trivial)
    let mut groups: BTreeMap<Option<usize>, Paired> = BTreeMap::new();
    for (q, quantity) in quantities.iter().enumerate() {
        let entry = groups.entry(quantity.distance).or_default();
        entry.0.extend(&pred[q]);
        entry.1.extend(&exact[q]);
        entry.2.extend(std::iter::repeat_n(trivial[q], exact[q].len()));
    }
    let wall_ms = ms(start);
    let rows = groups
        .into_iter()
        .map(|(distance, (p, e, tr))| ResultRow {
            family: spec.family.tag().to_string(),
            n,
            seed,
            target: cfg.target.tag().to_string(),
            distance,
            ml_rmse: rmse(&p, &e),
            trivial_rmse: rmse(&tr, &e),
            test_std: sample_std(&e),
            wall_ms: cfg.timing_in_csv.then_some(wall_ms),
        })
        .collect();
    let meta = CellMeta {
        n,
        seed,
        training_solves: 1,
        test_solves,
        skipped_points: skipped,
        model_count: bundle.models.len(),
        training_degenerate: gs0.degenerate,
        snapshots: record.as_ref().map(|r| r.len()),
        solve_ms,
        train_ms,
        score_ms,
        wall_ms,
        warnings,
    };
    Ok((rows, meta))
}

/// Run every `(n, seed)` cell of `cfg` for its configured target. Cells run
/// in parallel; rows come back ordered by the config's size and seed lists.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let cells: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let run = || {
        cells
            .par_iter()
            .map(|&(n, s)| run_cell(cfg, n, s))
            .collect::<Vec<_>>()
    };
    let outcomes = if cfg.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(run)
    } else {
        run()
    };
    let mut rows = Vec::new();
    let mut metas = Vec::new();
    for outcome in outcomes {
        let (r, m) = outcome?;
        rows.extend(r);
        metas.push(m);
    }
    Ok(SweepResult { config: cfg.clone(), rows, cells: metas })
}

/// `H/√n` sweep.
pub fn run_energy_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    run_sweep(&ExperimentConfig { target: Target::Energy, ..cfg.clone() })
}

/// All two-point correlations, one row per ring distance.
pub fn run_correlation_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    run_sweep(&ExperimentConfig { target: Target::AllCorrelations, ..cfg.clone() })
}
