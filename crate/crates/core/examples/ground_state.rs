//! Lanczos ground states for both model families.

use eqlearn::models::{heisenberg_ring, long_range_ising_ring, sample_params};
use eqlearn::quantum::{solve_model, LanczosOptions};

fn main() -> eqlearn::Result<()> {
    for n in [6, 8, 10, 12] {
        for spec in [heisenberg_ring(n)?, long_range_ising_ring(n, 3.0)?] {
            let x = sample_params(&spec, 1);
            let gs = solve_model(&spec, &x, &LanczosOptions::default())?;
            println!(
                "{:>16} n={n:2}  E0 = {:+.10}  gap ~ {:.4}  residual {:.1e}  matvecs {}",
                spec.family.tag(),
                gs.energy,
                gs.gap_estimate,
                gs.residual,
                gs.iterations
            );
        }
    }
    Ok(())
}
