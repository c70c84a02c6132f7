//! Measurements on dense state vectors: Pauli expectations, reduced
//! density matrices and the site-permutation representation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::GroupElement;
use crate::models::{ModelSpec, ObservableSpec};
use crate::quantum::pauli::{LocalOperator, PauliAction, PauliString};

/// `log₂` of the state length.
pub fn num_qubits(state: &[Complex64]) -> Result<usize> {
    let len = state.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "state length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `⟨ψ|P|ψ⟩`, real for Hermitian `P`.
pub fn expectation_pauli(state: &[Complex64], p: &PauliString) -> Result<f64> {
    let n = num_qubits(state)?;
    if p.n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: p.n(),
        });
    }
    let a = PauliAction::new(p);
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, amp) in state.iter().enumerate() {
        acc += state[b ^ a.flip].conj() * a.phase(b) * amp;
    }
    Ok(acc.re)
}

/// Expectation of a few-site operator placed on `sites`.
pub fn expectation_local(state: &[Complex64], sites: &[usize], op: &LocalOperator) -> Result<f64> {
    let n = num_qubits(state)?;
    let mut total = 0.0;
    for (c, p) in op.embed(n, sites)? {
        total += c * expectation_pauli(state, &p)?;
    }
    Ok(total)
}

/// `normalization · Σ_I α_I(x) ⟨O_I⟩`.
pub fn expectation_observable(
    state: &[Complex64],
    obs: &ObservableSpec,
    x: &[f64],
    spec: Option<&ModelSpec>,
) -> Result<f64> {
    let mut total = 0.0;
    for t in &obs.terms {
        let c = t.coefficient_at(x, spec)?;
        total += c * expectation_local(state, t.sites.sites(), &t.operator)?;
    }
    Ok(total * obs.normalization)
}

pub const MAX_RDM_SITES: usize = 3;

/// Reduced density matrix on `sites`, in the order given (first site is
/// the most significant index bit).
pub fn reduced_density_matrix(state: &[Complex64], sites: &[usize]) -> Result<DMatrix<Complex64>> {
    let n = num_qubits(state)?;
    if sites.len() > MAX_RDM_SITES {
        return Err(Error::ResourceLimit(format!(
            "reduced density matrices are limited to {MAX_RDM_SITES} sites"
        )));
    }
    for (k, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(Error::SiteOutOfRange { site: s, n });
        }
        if sites[..k].contains(&s) {
            return Err(Error::InvalidArgument(format!("site {s} repeated")));
        }
    }
    let m = sites.len();
    let bits: Vec<usize> = sites.iter().map(|&s| n - 1 - s).collect();
    let local_index = |b: usize| -> usize {
        bits.iter()
            .fold(0usize, |acc, &bit| (acc << 1) | ((b >> bit) & 1))
    };
    let site_mask: usize = bits.iter().map(|&bit| 1usize << bit).sum();
    let embed_local = |l: usize| -> usize {
        bits.iter()
            .enumerate()
            .map(|(k, &bit)| ((l >> (m - 1 - k)) & 1) << bit)
            .sum()
    };
    let d = 1usize << m;
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    for (b, amp) in state.iter().enumerate() {
        let rest = b & !site_mask;
        let row = local_index(b);
        for col in 0..d {
            let bc = rest | embed_local(col);
            rho[(row, col)] += amp * state[bc].conj();
        }
    }
    Ok(rho)
}

/// `U_g|ψ⟩`: the qubit on site `i` is moved to site `g(i)`.
pub fn apply_permutation(g: &GroupElement, state: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = num_qubits(state)?;
    let targets: Vec<usize> = (0..n).map(|i| n - 1 - g.apply(i, n)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (b, amp) in state.iter().enumerate() {
        let mut image = 0usize;
        for (i, &t) in targets.iter().enumerate() {
            image |= ((b >> (n - 1 - i)) & 1) << t;
        }
        out[image] = *amp;
    }
    Ok(out)
}
