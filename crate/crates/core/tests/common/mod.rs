#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use eqlearn::models::ModelSpec;
use eqlearn::quantum::{build_hamiltonian, Pauli, PauliString};

/// Ground energy, ground state and gap from a full dense diagonalization.
pub fn dense_ground_state(spec: &ModelSpec, x: &[f64]) -> (f64, Vec<Complex64>, f64) {
    let h = build_hamiltonian(spec, x).unwrap();
    let rows = h.to_dense();
    let dim = rows.len();
    for r in &rows {
        for v in r {
            assert!(v.im.abs() < 1e-14, "families are real");
        }
    }
    let m = DMatrix::from_fn(dim, dim, |i, j| rows[i][j].re);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = order[0];
    let state = eig.eigenvectors.column(k).iter().map(|&v| Complex64::new(v, 0.0)).collect();
    (
        eig.eigenvalues[k],
        state,
        eig.eigenvalues[order[1]] - eig.eigenvalues[k],
    )
}

/// `⟨ψ|P|ψ⟩` by explicit matrix action on basis states, big-endian.
pub fn brute_pauli(state: &[Complex64], sites: &[usize], letters: &[Pauli]) -> f64 {
    let n = state.len().trailing_zeros() as usize;
    let mut out = Complex64::new(0.0, 0.0);
    for (b, amp) in state.iter().enumerate() {
        let mut target = b;
        let mut coeff = Complex64::new(1.0, 0.0);
        for (&s, &p) in sites.iter().zip(letters) {
            let shift = n - 1 - s;
            let bit = (b >> shift) & 1;
            let m = p.matrix();
            // column `bit`: the single nonzero row
            let row = if m[0][bit] != Complex64::new(0.0, 0.0) { 0 } else { 1 };
            coeff *= m[row][bit];
            target = (target & !(1 << shift)) | (row << shift);
        }
        out += state[target].conj() * coeff * amp;
    }
    out.re
}

pub fn pauli_string(n: usize, sites: &[usize], letters: &[Pauli]) -> PauliString {
    PauliString::embed(n, sites, letters).unwrap()
}
