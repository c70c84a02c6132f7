//! Sample-complexity theory: the power-law exponent ω, the Lambert W
//! function, error-bound curves and least-squares fits of those curves to
//! measured errors.

pub mod bounds;
pub mod fit;
pub mod lambert;
pub mod omega;

pub use bounds::{
    error_bound_power_law, error_bound_short_range, power_law_sample_complexity, BoundCurve,
    BoundForm,
};
pub use fit::{fit_bound, BoundFit, CurveKind};
pub use lambert::lambert_w;
pub use omega::{compute_omega, compute_omega_rational, OmegaParams};
