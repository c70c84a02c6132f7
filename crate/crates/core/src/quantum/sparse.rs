//! Row-compressed complex operators assembled from Pauli sums.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::quantum::pauli::{PauliAction, PauliString};

/// Largest register the exact solver accepts unless told otherwise.
pub const DEFAULT_QUBIT_CAP: usize = 14;

const PAR_THRESHOLD: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<Complex64>,
    hermitian: bool,
}

impl SparseOperator {
    /// `Σ_k c_k P_k` over `n` qubits. Terms sharing a flip mask are merged
    /// and exact zeros dropped.
    pub fn from_pauli_sum(n: usize, terms: &[(f64, PauliString)]) -> Result<Self> {
        for (_, p) in terms {
            if p.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: p.n(),
                });
            }
        }
        let dim = 1usize << n;
        let mut by_flip: BTreeMap<usize, Vec<(f64, PauliAction)>> = BTreeMap::new();
        for (c, p) in terms {
            let a = PauliAction::new(p);
            by_flip.entry(a.flip).or_default().push((*c, a));
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        let mut row: Vec<(usize, Complex64)> = Vec::with_capacity(by_flip.len());
        for r in 0..dim {
            row.clear();
            for (&flip, group) in &by_flip {
                // entry (r, c) with r = c ⊕ flip
                let c = r ^ flip;
                let v: Complex64 = group.iter().map(|(coef, a)| a.phase(c) * *coef).sum();
                if v != Complex64::new(0.0, 0.0) {
                    row.push((c, v));
                }
            }
            row.sort_unstable_by_key(|e| e.0);
            for &(c, v) in &row {
                cols.push(c);
                values.push(v);
            }
            row_ptr.push(cols.len());
        }
        let hermitian = terms.iter().all(|(c, _)| c.is_finite());
        Ok(SparseOperator {
            dim,
            row_ptr,
            cols,
            values,
            hermitian,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.cols[lo..hi].binary_search(&c) {
            Ok(k) => self.values[lo + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        self.cols[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// `out = self · v`. Rows are summed in a fixed order, so the result is
    /// bitwise identical with or without the parallel path.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        let row_sum = |r: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * v[self.cols[k]];
            }
            acc
        };
        if self.dim >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(|(r, o)| *o = row_sum(r));
        } else {
            out.iter_mut().enumerate().for_each(|(r, o)| *o = row_sum(r));
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply_into(v, &mut out);
        out
    }

    /// Dense copy, row-major. Intended for small test oracles.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); self.dim]; self.dim];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] = v;
            }
        }
        m
    }
}

/// Pauli decomposition of `H(x)`.
pub fn hamiltonian_terms(spec: &ModelSpec, x: &[f64]) -> Result<Vec<(f64, PauliString)>> {
    spec.check_params(x)?;
    let mut out = Vec::new();
    for t in &spec.terms {
        let c = t.coupling.evaluate(x);
        for (k, p) in t.operator.embed(spec.n, t.sites.sites())? {
            out.push((c * k, p));
        }
    }
    Ok(out)
}

pub fn build_hamiltonian(spec: &ModelSpec, x: &[f64]) -> Result<SparseOperator> {
    build_hamiltonian_capped(spec, x, DEFAULT_QUBIT_CAP)
}

pub fn build_hamiltonian_capped(
    spec: &ModelSpec,
    x: &[f64],
    max_qubits: usize,
) -> Result<SparseOperator> {
    if spec.n > max_qubits {
        return Err(Error::ResourceLimit(format!(
            "{} qubits exceeds the cap of {max_qubits}",
            spec.n
        )));
    }
    SparseOperator::from_pauli_sum(spec.n, &hamiltonian_terms(spec, x)?)
}
