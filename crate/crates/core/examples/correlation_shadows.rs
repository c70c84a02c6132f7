//! Correlation sweep trained from classical shadows, against the same
//! sweep with exact training targets.

use eqlearn::harness::{run_correlation_sweep, ExperimentConfig, SourceConfig};

fn main() -> eqlearn::Result<()> {
    let base = ExperimentConfig {
        sizes: vec![6, 8],
        seeds: vec![0, 1, 2],
        test_points: 10,
        ..Default::default()
    };
    let exact = run_correlation_sweep(&base)?;
    let shadow = run_correlation_sweep(&ExperimentConfig {
        source: SourceConfig::Shadow { constant: None, snapshots: Some(5_000) },
        ..base
    })?;
    println!(" n  d   exact-source  shadow-source  trivial");
    for (n, d) in exact.groups() {
        println!(
            "{n:2} {:2}   {:.4}        {:.4}         {:.4}",
            d.unwrap_or(0),
            exact.median_ml_rmse(n, d).unwrap(),
            shadow.median_ml_rmse(n, d).unwrap(),
            exact.median_trivial_rmse(n, d).unwrap()
        );
    }
    Ok(())
}
