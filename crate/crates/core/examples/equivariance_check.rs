//! f(O_{gI}, x) = f(O_I, g·x), checked with independent solves.

use eqlearn::lattice::{act_on_sites, build_group, SiteSet};
use eqlearn::models::{act_on_params, long_range_ising_ring, sample_params};
use eqlearn::quantum::{expectation_local, solve_model, LanczosOptions, LocalOperator, Pauli};

fn main() -> eqlearn::Result<()> {
    let n = 8;
    let spec = long_range_ising_ring(n, 3.0)?;
    let group = build_group(n, true)?;
    let x = sample_params(&spec, 7);
    let opts = LanczosOptions::default();
    let psi = solve_model(&spec, &x, &opts)?.state;
    let support = SiteSet::from([0, 3]);
    let op = LocalOperator::pair(Pauli::Z);
    let mut worst = 0.0f64;
    for g in group.elements() {
        let image = act_on_sites(g, &support, n)?;
        let moved = solve_model(&spec, &act_on_params(g, &x, &spec)?, &opts)?.state;
        let lhs = expectation_local(&psi, image.sites(), &op)?;
        let rhs = expectation_local(&moved, support.sites(), &op)?;
        println!("{g:?}: <ZZ>{image} = {lhs:+.12}  vs  {rhs:+.12}");
        worst = worst.max((lhs - rhs).abs());
    }
    println!("max deviation {worst:.2e}");
    Ok(())
}
