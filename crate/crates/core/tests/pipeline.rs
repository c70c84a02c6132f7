use std::process::Command;
use std::time::Instant;

use eqlearn::harness::{emit_results, run_correlation_sweep, run_energy_sweep, ExperimentConfig};
use eqlearn::lattice::{build_group, ring_distance};
use eqlearn::learn::{predict_observable, predict_observable_counted, train_models, LearnerConfig, TargetSource};
use eqlearn::models::{
    all_correlations_observable, correlation_observable, energy_observable, heisenberg_ring,
    long_range_ising_ring, sample_params, Family, ObservableSpec,
};
use eqlearn::quantum::{solve_model, LanczosOptions};

fn small(family: Family) -> ExperimentConfig {
    ExperimentConfig {
        family,
        sizes: vec![6, 8],
        seeds: vec![0, 7],
        test_points: 5,
        ..Default::default()
    }
}

#[test]
fn smoke_sweep_rows_complete() {
    let r = run_energy_sweep(&ExperimentConfig {
        sizes: vec![6],
        seeds: vec![0],
        test_points: 5,
        ..Default::default()
    })
    .unwrap();
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert!(row.ml_rmse.is_finite() && row.trivial_rmse >= 0.0 && row.test_std >= 0.0);
    assert_eq!(row.distance, None);
    assert_eq!(r.cells[0].test_solves, 5);
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = small(Family::LongRangeIsing);
    let a = run_energy_sweep(&cfg).unwrap();
    let b = run_energy_sweep(&ExperimentConfig { workers: 2, ..cfg }).unwrap();
    assert_eq!(a.rows, b.rows);
    let da = tempfile::tempdir().unwrap();
    let db = tempfile::tempdir().unwrap();
    let (ca, _) = emit_results(&a, da.path(), "r").unwrap();
    let (cb, _) = emit_results(&b, db.path(), "r").unwrap();
    assert_eq!(std::fs::read(ca).unwrap(), std::fs::read(cb).unwrap());
}

#[test]
fn every_cell_present_in_config_order() {
    let cfg = small(Family::Heisenberg);
    let r = run_energy_sweep(&cfg).unwrap();
    let keys: Vec<(usize, u64)> = r.rows.iter().map(|r| (r.n, r.seed)).collect();
    assert_eq!(keys, vec![(6, 0), (6, 7), (8, 0), (8, 7)]);
    assert!(r.cells.iter().all(|c| c.training_solves == 1));
}

#[test]
fn exact_correlations_stay_in_range() {
    let r = run_correlation_sweep(&ExperimentConfig {
        sizes: vec![8],
        seeds: vec![1],
        test_points: 4,
        ..Default::default()
    })
    .unwrap();
    assert_eq!(r.rows.len(), 4);
    for row in &r.rows {
        assert!(row.ml_rmse.is_finite() && row.ml_rmse <= 2.0);
    }
}

#[test]
fn correlation_predictions_symmetric() {
    let n = 8;
    let spec = heisenberg_ring(n).unwrap();
    let group = build_group(n, true).unwrap();
    let x0 = sample_params(&spec, 2);
    let gs = solve_model(&spec, &x0, &LanczosOptions::default()).unwrap();
    let obs = all_correlations_observable(n).unwrap();
    let bundle = train_models(
        &spec, &x0, &group, &obs, TargetSource::Exact(&gs.state), false, &LearnerConfig::default(),
    )
    .unwrap();
    let x = sample_params(&spec, 3);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = predict_observable(&bundle, &x, &correlation_observable(i, j).unwrap()).unwrap();
            let b = predict_observable(&bundle, &x, &correlation_observable(j, i).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn one_model_per_orbit_class() {
    for n in [6usize, 8, 12] {
        let group = build_group(n, true).unwrap();
        let cases = [
            (heisenberg_ring(n).unwrap(), 1usize),
            (long_range_ising_ring(n, 3.0).unwrap(), n / 2 + 1),
        ];
        for (spec, classes) in cases {
            let x0 = sample_params(&spec, 0);
            let gs = solve_model(&spec, &x0, &LanczosOptions::default()).unwrap();
            let energy = train_models(
                &spec, &x0, &group, &energy_observable(&spec), TargetSource::Exact(&gs.state), false,
                &LearnerConfig::default(),
            )
            .unwrap();
            assert_eq!(energy.models.len(), classes, "{:?} n={n}", spec.family);
            // far fewer models than terms
            assert!(energy.models.len() < spec.terms.len());
        }
    }
}

fn restricted(obs: &ObservableSpec, n: usize, max_d: usize) -> ObservableSpec {
    ObservableSpec {
        terms: obs
            .terms
            .iter()
            .filter(|t| t.sites.len() == 2 && ring_distance(t.sites.sites()[0], t.sites.sites()[1], n) <= max_d)
            .cloned()
            .collect(),
        normalization: obs.normalization,
    }
}

#[test]
fn prediction_cost_linear_in_terms() {
    let n = 12;
    let spec = long_range_ising_ring(n, 3.0).unwrap();
    let group = build_group(n, true).unwrap();
    let x0 = sample_params(&spec, 5);
    let gs = solve_model(&spec, &x0, &LanczosOptions::default()).unwrap();
    let full = energy_observable(&spec);
    let bundle = train_models(
        &spec, &x0, &group, &full, TargetSource::Exact(&gs.state), false, &LearnerConfig::default(),
    )
    .unwrap();
    // distances 1..2 versus 1..4: 24 against 48 bond terms, none at d = n/2
    let half = restricted(&full, n, 2);
    let double = restricted(&full, n, 4);
    assert_eq!(double.terms.len(), 2 * half.terms.len());
    let x = sample_params(&spec, 6);
    let (_, cost_half) = predict_observable_counted(&bundle, &x, &half).unwrap();
    let (_, cost_double) = predict_observable_counted(&bundle, &x, &double).unwrap();
    assert_eq!(cost_double, 2 * cost_half);

    let per_term = |obs: &ObservableSpec| {
        (0..7)
            .map(|_| {
                let t = Instant::now();
                for _ in 0..20 {
                    predict_observable(&bundle, &x, obs).unwrap();
                }
                t.elapsed().as_secs_f64() / obs.terms.len() as f64
            })
            .fold(f64::INFINITY, f64::min)
    };
    let ratio = per_term(&double) / per_term(&half);
    assert!(ratio <= 1.5, "per-term prediction time grew by {ratio:.2}");
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqlearn"))
}

#[test]
fn cli_sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    std::fs::write(&cfg, r#"{"sizes": [6, 8, 10], "seeds": [0], "test_points": 4}"#).unwrap();
    let out = bin()
        .args(["sweep-energy", "--config", cfg.to_str().unwrap(), "--seed", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["rows"], 3);
    let csv = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(csv.starts_with("family,n,seed,target,distance,ml_rmse,trivial_rmse,test_std,wall_ms\n"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("3")));

    let fit_cfg = dir.path().join("fit.json");
    std::fs::write(
        &fit_cfg,
        serde_json::json!({
            "input": dir.path().join("energy.csv"),
            "curve": {"kind": "short_range", "d": null}
        })
        .to_string(),
    )
    .unwrap();
    let out = bin()
        .args(["fit-bounds", "--config", fit_cfg.to_str().unwrap(), "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let overlay = std::fs::read_to_string(dir.path().join("overlay.csv")).unwrap();
    assert_eq!(overlay.lines().next(), Some("n,measured,fitted_bound"));
    assert_eq!(overlay.lines().count(), 4);
}

#[test]
fn cli_errors_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"sizes": [6], "seeds": []}"#).unwrap();
    let out = bin()
        .args(["sweep-correlations", "--config", cfg.to_str().unwrap(), "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "config");

    let out = bin().args(["sweep-energy", "--config", "/nonexistent/cfg.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "io");
}

#[test]
fn cli_shadow_cache_and_theory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("shadow.json");
    std::fs::write(&cfg, r#"{"model": {"family": "heisenberg", "n": 6}, "snapshots": 64}"#).unwrap();
    let out = bin()
        .args(["shadow-cache", "--config", cfg.to_str().unwrap(), "--seed", "9", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cache: eqlearn::harness::cli::ShadowCache = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("shadow_heisenberg_n6_seed9.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(cache.record.len(), 64);
    assert_eq!(cache.params.len(), 6);

    let out = bin().args(["theory", "--out"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["omega"], "864/83");
}
