use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};
use serde::Serialize;
use std::fmt::Debug;

use crate::error::{Error, Result};

/// ω and every intermediate of its closed form, in any ordered field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaParams<T> {
    pub alpha: T,
    pub dimension: u32,
    pub locality: u32,
    pub epsilon_aux: T,
    pub alpha_prime: T,
    pub beta: T,
    pub eta: T,
    pub nu: T,
    pub omega: T,
}

fn omega_in<T>(alpha: T, dimension: u32, locality: u32) -> Result<OmegaParams<T>>
where
    T: Num + Clone + PartialOrd + Debug + FromPrimitive,
{
    if dimension < 1 || locality < 1 {
        return Err(Error::Domain(format!(
            "need D >= 1 and k >= 1, got D = {dimension}, k = {locality}"
        )));
    }
    let lift = |v: u32| T::from_u32(v).expect("small integers are representable");
    let d = lift(dimension);
    let k = lift(locality);
    let one = T::one();
    let two = lift(2);
    let half = one.clone() / two.clone();

    let excess = alpha.clone() - two.clone() * d.clone(); // α − 2D
    if excess <= T::zero() {
        return Err(Error::Domain(format!(
            "power-law bound needs alpha > 2D, got alpha = {alpha:?}, D = {dimension}"
        )));
    }
    let alpha_minus_d = alpha.clone() - d.clone();
    let sq = excess.clone() * excess.clone();
    let epsilon_aux = half.clone() * sq.clone() / (sq + alpha_minus_d.clone());
    let alpha_prime = excess.clone() - epsilon_aux.clone();
    let beta = alpha_minus_d.clone() / excess.clone() - epsilon_aux.clone() / two.clone();
    let eta = half * excess / (two.clone() * alpha.clone() - two * d.clone() - one.clone());
    let nu = alpha_prime.clone() * (beta.clone() * (one - eta.clone()) - eta.clone());
    if nu <= d {
        return Err(Error::DegenerateBound(format!(
            "nu = {nu:?} does not exceed D = {dimension}"
        )));
    }
    let omega = k * d.clone() / (nu.clone() - d);
    Ok(OmegaParams {
        alpha,
        dimension,
        locality,
        epsilon_aux,
        alpha_prime,
        beta,
        eta,
        nu,
        omega,
    })
}

/// Floating-point ω for power-law exponent `alpha`, dimension `dimension`
/// and locality `locality`.
pub fn compute_omega(alpha: f64, dimension: u32, locality: u32) -> Result<OmegaParams<f64>> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    omega_in(alpha, dimension, locality)
}

/// Exact ω for a rational exponent.
pub fn compute_omega_rational(
    alpha: BigRational,
    dimension: u32,
    locality: u32,
) -> Result<OmegaParams<BigRational>> {
    omega_in(alpha, dimension, locality)
}

impl OmegaParams<BigRational> {
    /// Exact rational route for an exponent given as `numer/denom`.
    pub fn from_ratio(numer: i64, denom: i64, dimension: u32, locality: u32) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        compute_omega_rational(
            BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            dimension,
            locality,
        )
    }

    pub fn to_f64(&self) -> OmegaParams<f64> {
        let f = |r: &BigRational| -> f64 {
            use num_traits::ToPrimitive;
            r.to_f64().unwrap_or(f64::NAN)
        };
        OmegaParams {
            alpha: f(&self.alpha),
            dimension: self.dimension,
            locality: self.locality,
            epsilon_aux: f(&self.epsilon_aux),
            alpha_prime: f(&self.alpha_prime),
            beta: f(&self.beta),
            eta: f(&self.eta),
            nu: f(&self.nu),
            omega: f(&self.omega),
        }
    }
}

impl<T> OmegaParams<T>
where
    T: Num + Clone + PartialOrd + Debug + FromPrimitive,
{
    /// Recompute from `(alpha, D, k)` and compare with the stored values.
    pub fn is_consistent(&self) -> bool {
        omega_in(self.alpha.clone(), self.dimension, self.locality).is_ok_and(|p| &p == self)
    }
}

impl<T: Signed> OmegaParams<T> {
    pub fn is_positive(&self) -> bool {
        self.omega.is_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn ising_chain_exponent() {
        let p = OmegaParams::from_ratio(3, 1, 1, 2).unwrap();
        assert_eq!(p.omega, q(864, 83));
        assert_eq!(p.epsilon_aux, q(1, 6));
        assert_eq!(p.alpha_prime, q(5, 6));
        assert_eq!(p.beta, q(23, 12));
        assert_eq!(p.eta, q(1, 6));
        assert_eq!(p.nu, q(515, 432));
        assert!(p.is_consistent() && p.is_positive());

        let f = compute_omega(3.0, 1, 2).unwrap();
        assert!((f.omega - 864.0 / 83.0).abs() < 1e-12);
        assert!((f.omega - 10.41).abs() < 0.005);
    }

    #[test]
    fn float_agrees_with_rational() {
        for (a, b) in [(3, 1), (5, 2), (7, 2), (9, 4), (11, 2), (21, 10)] {
            for dim in [1u32] {
                for k in [1u32, 2, 3] {
                    let r = OmegaParams::from_ratio(a, b, dim, k).unwrap().to_f64();
                    let f = compute_omega(a as f64 / b as f64, dim, k).unwrap();
                    assert!((r.omega - f.omega).abs() <= 1e-12 * r.omega.abs().max(1.0));
                    assert!((r.nu - f.nu).abs() <= 1e-12);
                }
            }
        }
        let r = OmegaParams::from_ratio(7, 1, 2, 2).unwrap().to_f64();
        let f = compute_omega(7.0, 2, 2).unwrap();
        assert!((r.omega - f.omega).abs() <= 1e-12 * r.omega);
    }

    #[test]
    fn diverges_near_threshold() {
        let p = compute_omega(2.0 + 1e-4, 1, 2).unwrap();
        assert!(p.omega > 1e6, "omega = {}", p.omega);
        let a = compute_omega(2.1, 1, 2).unwrap().omega;
        let b = compute_omega(2.01, 1, 2).unwrap().omega;
        assert!(b > a);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(compute_omega(2.0, 1, 2), Err(Error::Domain(_))));
        assert!(matches!(compute_omega(1.5, 1, 2), Err(Error::Domain(_))));
        assert!(matches!(compute_omega(3.0, 0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn nu_exceeds_dimension_above_threshold() {
        for d in 1..=4u32 {
            for i in 1..200 {
                let alpha = 2.0 * d as f64 + 0.05 * i as f64;
                let p = compute_omega(alpha, d, 2).unwrap();
                assert!(p.nu > d as f64 && p.omega > 0.0, "{p:?}");
            }
        }
    }
}
