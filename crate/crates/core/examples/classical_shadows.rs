//! Classical-shadow estimates of correlations converging with the number
//! of snapshots.

use eqlearn::models::{correlation_observable, heisenberg_ring, sample_params};
use eqlearn::quantum::{expectation_observable, solve_model, LanczosOptions};
use eqlearn::shadows::{estimate_correlation, estimate_rdm, measure_shadow};

fn main() -> eqlearn::Result<()> {
    let n = 8;
    let spec = heisenberg_ring(n)?;
    let x = sample_params(&spec, 2);
    let psi = solve_model(&spec, &x, &LanczosOptions::default())?.state;
    let record = measure_shadow(&psi, 20_000, 11)?;
    for j in 1..=n / 2 {
        let exact = expectation_observable(&psi, &correlation_observable(0, j)?, &x, None)?;
        print!("C_0{j}: exact {exact:+.4}");
        for t in [200, 2_000, 20_000] {
            print!("  T={t}: {:+.4}", estimate_correlation(&record.truncated(t), 0, j)?);
        }
        println!();
    }
    let rdm = estimate_rdm(&record, &[0, 1])?.projected_psd();
    println!("projected 2-site RDM on (0, 1):\n{:.3}", rdm.matrix.map(|z| z.re));
    Ok(())
}
