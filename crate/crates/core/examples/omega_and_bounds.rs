//! ω from the interaction exponent and the resulting error bounds.

use eqlearn::theory::{
    compute_omega, error_bound_power_law, error_bound_short_range, BoundForm, OmegaParams,
};

fn main() -> eqlearn::Result<()> {
    let exact = OmegaParams::from_ratio(3, 1, 1, 2)?;
    println!("alpha = 3: omega = {} ~ {:.4}", exact.omega, exact.to_f64().omega);
    for alpha in [2.5, 3.0, 4.0, 6.0] {
        let p = compute_omega(alpha, 1, 2)?;
        println!("alpha = {alpha}: nu = {:.4}, omega = {:.4}", p.nu, p.omega);
    }
    let omega = exact.to_f64().omega;
    println!("\n         n   exact      asymptotic  short-range(c=1,d=2)");
    for k in [10, 15, 20, 25, 30] {
        let n = 2f64.powi(k);
        println!(
            "{:>10}   {:.6}   {:.6}    {:.6}",
            1u64 << k,
            error_bound_power_law(n, omega, 1.0, BoundForm::Exact)?,
            error_bound_power_law(n, omega, 1.0, BoundForm::Asymptotic)?,
            error_bound_short_range(n, 1.0, 2)?
        );
    }
    Ok(())
}
