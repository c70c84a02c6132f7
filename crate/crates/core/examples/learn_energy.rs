//! Train on a single ground state and predict H/√n at fresh parameters.

use eqlearn::lattice::build_group;
use eqlearn::learn::{predict_observable, train_models, LearnerConfig, TargetSource};
use eqlearn::models::{energy_observable, heisenberg_ring, sample_params};
use eqlearn::quantum::{solve_model, LanczosOptions};

fn main() -> eqlearn::Result<()> {
    let n = 10;
    let spec = heisenberg_ring(n)?;
    let group = build_group(n, true)?;
    let obs = energy_observable(&spec);
    let opts = LanczosOptions::default();

    let x0 = sample_params(&spec, 0);
    let train = solve_model(&spec, &x0, &opts)?;
    let bundle = train_models(
        &spec,
        &x0,
        &group,
        &obs,
        TargetSource::Exact(&train.state),
        train.degenerate,
        &LearnerConfig::default(),
    )?;
    for m in &bundle.models {
        println!(
            "{}: {} rows, lambda {:?}, {} nonzero weights",
            m.key(),
            m.training_rows,
            m.lambda,
            m.nonzeros
        );
    }
    let trivial = train.energy / (n as f64).sqrt();
    for seed in 1..=8 {
        let x = sample_params(&spec, seed);
        let exact = solve_model(&spec, &x, &opts)?.energy / (n as f64).sqrt();
        let pred = predict_observable(&bundle, &x, &obs)?;
        println!("seed {seed}: exact {exact:+.4}  predicted {pred:+.4}  trivial {trivial:+.4}");
    }
    Ok(())
}
