//! Scaling sweep over n with CSV output and a fitted bound overlay.
//!
//! cargo run --release --example energy_sweep -- [out_dir]

use eqlearn::harness::{emit_results, overlay_bounds, run_energy_sweep, ExperimentConfig};
use eqlearn::theory::CurveKind;

fn main() -> eqlearn::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "results".into());
    let cfg = ExperimentConfig {
        sizes: vec![6, 8, 10],
        seeds: vec![0, 1, 2],
        ..Default::default()
    };
    let result = run_energy_sweep(&cfg)?;
    for (n, d) in result.groups() {
        println!(
            "n = {n:2}: ml {:.4}  trivial {:.4}  test std {:.4}",
            result.median_ml_rmse(n, d).unwrap(),
            result.median_trivial_rmse(n, d).unwrap(),
            result.median_test_std(n, d).unwrap()
        );
    }
    let (csv, json) = emit_results(&result, std::path::Path::new(&out), "energy")?;
    println!("wrote {} and {}", csv.display(), json.display());
    let (fit, table) = overlay_bounds(&result.rows, CurveKind::ShortRange { d: None }, None)?;
    println!("fitted {:?} (rms log residual {:.3})", fit.curve, fit.rms_residual);
    for r in table {
        println!("  n = {:2}: measured {:.4}  bound {:.4}", r.n, r.measured, r.fitted_bound);
    }
    Ok(())
}
