//! Classical shadows from randomized single-qubit Pauli measurements.
//!
//! Each snapshot picks X, Y or Z uniformly for every qubit, rotates the
//! state into that product basis and draws one bitstring from the Born
//! distribution. Snapshot `t` draws from its own ChaCha stream of the
//! master seed, so records are reproducible and can be built in parallel.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::quantum::pauli::Pauli;
use crate::quantum::state::num_qubits;

const BASES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// Measurement record: per snapshot, one basis letter and one ±1 outcome
/// per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RecordJson", try_from = "RecordJson")]
pub struct ShadowRecord {
    n: usize,
    /// Flattened `T × n` basis letters.
    bases: Vec<Pauli>,
    /// Bit `i` set means qubit `i` returned −1.
    outcomes: Vec<u64>,
}

impl ShadowRecord {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn basis(&self, snapshot: usize, qubit: usize) -> Pauli {
        self.bases[snapshot * self.n + qubit]
    }

    /// `+1` or `−1`.
    pub fn outcome(&self, snapshot: usize, qubit: usize) -> f64 {
        if (self.outcomes[snapshot] >> qubit) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Reproduce the basis-string / bitstring pair of one snapshot.
    pub fn snapshot_strings(&self, snapshot: usize) -> (String, String) {
        let bases = (0..self.n).map(|q| self.basis(snapshot, q).symbol()).collect();
        let bits = (0..self.n)
            .map(|q| if (self.outcomes[snapshot] >> q) & 1 == 1 { '1' } else { '0' })
            .collect();
        (bases, bits)
    }

    /// Keep only the first `t` snapshots.
    pub fn truncated(&self, t: usize) -> ShadowRecord {
        let t = t.min(self.len());
        ShadowRecord {
            n: self.n,
            bases: self.bases[..t * self.n].to_vec(),
            outcomes: self.outcomes[..t].to_vec(),
        }
    }

    fn check_sites(&self, sites: &[usize]) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidArgument("empty shadow record".into()));
        }
        for (k, &s) in sites.iter().enumerate() {
            if s >= self.n {
                return Err(Error::SiteOutOfRange { site: s, n: self.n });
            }
            if sites[..k].contains(&s) {
                return Err(Error::InvalidArgument(format!("site {s} repeated")));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotJson {
    bases: String,
    outcomes: String,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    n: usize,
    #[serde(rename = "T")]
    t: usize,
    snapshots: Vec<SnapshotJson>,
}

impl From<ShadowRecord> for RecordJson {
    fn from(r: ShadowRecord) -> Self {
        RecordJson {
            n: r.n,
            t: r.len(),
            snapshots: (0..r.len())
                .map(|s| {
                    let (bases, outcomes) = r.snapshot_strings(s);
                    SnapshotJson { bases, outcomes }
                })
                .collect(),
        }
    }
}

impl TryFrom<RecordJson> for ShadowRecord {
    type Error = Error;

    fn try_from(j: RecordJson) -> Result<Self> {
        if j.n > 64 {
            return Err(Error::InvalidArgument("shadow records hold at most 64 qubits".into()));
        }
        if j.t != j.snapshots.len() {
            return Err(Error::Dimension {
                expected: j.t,
                got: j.snapshots.len(),
            });
        }
        let mut bases = Vec::with_capacity(j.t * j.n);
        let mut outcomes = Vec::with_capacity(j.t);
        for s in &j.snapshots {
            if s.bases.len() != j.n || s.outcomes.len() != j.n {
                return Err(Error::Dimension {
                    expected: j.n,
                    got: s.bases.len().min(s.outcomes.len()),
                });
            }
            for c in s.bases.chars() {
                match Pauli::from_symbol(c) {
                    Some(p) if p != Pauli::I => bases.push(p),
                    _ => return Err(Error::InvalidArgument(format!("bad basis letter {c:?}"))),
                }
            }
            let mut bits = 0u64;
            for (q, c) in s.outcomes.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => bits |= 1 << q,
                    _ => return Err(Error::InvalidArgument(format!("bad outcome bit {c:?}"))),
                }
            }
            outcomes.push(bits);
        }
        Ok(ShadowRecord {
            n: j.n,
            bases,
            outcomes,
        })
    }
}

/// Rotate qubit `q` so that a Z measurement afterwards measures `basis`.
fn rotate_into(state: &mut [Complex64], n: usize, q: usize, basis: Pauli) {
    let bit = 1usize << (n - 1 - q);
    // rows of H (for X) and H·S† (for Y)
    let (u00, u01, u10, u11) = match basis {
        Pauli::X => (
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        ),
        Pauli::Y => (
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        ),
        _ => return,
    };
    for b in 0..state.len() {
        if b & bit == 0 {
            let a0 = state[b];
            let a1 = state[b | bit];
            state[b] = u00 * a0 + u01 * a1;
            state[b | bit] = u10 * a0 + u11 * a1;
        }
    }
}

fn take_snapshot(state: &[Complex64], n: usize, seed: u64, index: u64) -> (Vec<Pauli>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let bases: Vec<Pauli> = (0..n).map(|_| BASES[rng.random_range(0..3)]).collect();
    let mut rotated = state.to_vec();
    for (q, &b) in bases.iter().enumerate() {
        rotate_into(&mut rotated, n, q, b);
    }
    let u: f64 = rng.random();
    let total: f64 = rotated.iter().map(|z| z.norm_sqr()).sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut drawn = rotated.len() - 1;
    for (b, z) in rotated.iter().enumerate() {
        acc += z.norm_sqr();
        if acc > target {
            drawn = b;
            break;
        }
    }
    let mut bits = 0u64;
    for q in 0..n {
        if (drawn >> (n - 1 - q)) & 1 == 1 {
            bits |= 1 << q;
        }
    }
    (bases, bits)
}

/// Draw `t` randomized-Pauli snapshots of `state`.
pub fn measure_shadow(state: &[Complex64], t: usize, seed: u64) -> Result<ShadowRecord> {
    if t < 1 {
        return Err(Error::InvalidArgument("need at least one snapshot".into()));
    }
    let n = num_qubits(state)?;
    if n > 64 {
        return Err(Error::ResourceLimit("shadow records hold at most 64 qubits".into()));
    }
    let snaps: Vec<(Vec<Pauli>, u64)> = (0..t as u64)
        .into_par_iter()
        .map(|k| take_snapshot(state, n, seed, k))
        .collect();
    let mut bases = Vec::with_capacity(t * n);
    let mut outcomes = Vec::with_capacity(t);
    for (b, o) in snaps {
        bases.extend(b);
        outcomes.push(o);
    }
    Ok(ShadowRecord { n, bases, outcomes })
}

/// `T = ⌈C·log₂ n⌉`.
pub fn shadow_count(n: usize, c: f64) -> usize {
    (c * (n as f64).log2()).ceil() as usize
}

pub const DEFAULT_SHADOW_CONSTANT: f64 = 50.0;

/// Per-snapshot estimates of the Pauli product `letters` on `sites`:
/// `Π 3·outcome` when every basis matches its letter, otherwise zero.
pub fn pauli_snapshot_values(record: &ShadowRecord, sites: &[usize], letters: &[Pauli]) -> Result<Vec<f64>> {
    record.check_sites(sites)?;
    if sites.len() != letters.len() {
        return Err(Error::Dimension {
            expected: sites.len(),
            got: letters.len(),
        });
    }
    Ok((0..record.len())
        .map(|t| {
            let mut v = 1.0;
            for (&s, &p) in sites.iter().zip(letters) {
                if p == Pauli::I {
                    continue;
                }
                if record.basis(t, s) != p {
                    return 0.0;
                }
                v *= 3.0 * record.outcome(t, s);
            }
            v
        })
        .collect())
}

/// Shadow estimate of `⟨P⟩` for a Pauli product on `sites`.
pub fn estimate_pauli(record: &ShadowRecord, sites: &[usize], letters: &[Pauli]) -> Result<f64> {
    let v = pauli_snapshot_values(record, sites, letters)?;
    Ok(v.iter().sum::<f64>() / v.len() as f64)
}

/// Linear-inversion estimate of a reduced density matrix. Hermitian with
/// unit trace, not necessarily positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowEstimate {
    pub sites: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
    pub snapshots: usize,
}

impl ShadowEstimate {
    /// Nearest unit-trace positive semidefinite matrix in Frobenius norm.
    pub fn projected_psd(&self) -> ShadowEstimate {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let lambdas: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let clipped = project_to_simplex(&lambdas);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            clipped.len(),
            clipped.iter().map(|&l| Complex64::new(l, 0.0)),
        ));
        let v = &eig.eigenvectors;
        ShadowEstimate {
            sites: self.sites.clone(),
            matrix: v * d * v.adjoint(),
            snapshots: self.snapshots,
        }
    }
}

/// Euclidean projection onto `{λ ≥ 0, Σλ = 1}`.
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        css += x;
        let t = (css - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// `(I + 3·o·P)/2`, the single-qubit inverse channel applied to the
/// measured eigenprojector.
fn inverted_snapshot(basis: Pauli, outcome: f64) -> [[Complex64; 2]; 2] {
    let p = basis.matrix();
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let id = if r == c { 1.0 } else { 0.0 };
            m[r][c] = (Complex64::new(id, 0.0) + p[r][c] * (3.0 * outcome)) * 0.5;
        }
    }
    m
}

pub const MAX_SHADOW_RDM_SITES: usize = 2;

/// Average of `⊗_sites (3|b⟩⟨b| − I)` over all snapshots.
pub fn estimate_rdm(record: &ShadowRecord, sites: &[usize]) -> Result<ShadowEstimate> {
    record.check_sites(sites)?;
    if sites.len() > MAX_SHADOW_RDM_SITES {
        return Err(Error::InvalidArgument(format!(
            "shadow RDMs are limited to {MAX_SHADOW_RDM_SITES} sites"
        )));
    }
    let d = 1usize << sites.len();
    let m = sites.len();
    let mut acc = DMatrix::<Complex64>::zeros(d, d);
    for t in 0..record.len() {
        let factors: Vec<[[Complex64; 2]; 2]> = sites
            .iter()
            .map(|&s| inverted_snapshot(record.basis(t, s), record.outcome(t, s)))
            .collect();
        for r in 0..d {
            for c in 0..d {
                let mut v = Complex64::new(1.0, 0.0);
                for (k, f) in factors.iter().enumerate() {
                    let shift = m - 1 - k;
                    v *= f[(r >> shift) & 1][(c >> shift) & 1];
                }
                acc[(r, c)] += v;
            }
        }
    }
    acc /= Complex64::new(record.len() as f64, 0.0);
    Ok(ShadowEstimate {
        sites: sites.to_vec(),
        matrix: acc,
        snapshots: record.len(),
    })
}

/// Shadow estimate of `C_ij = (XX + YY + ZZ)/3`.
pub fn estimate_correlation(record: &ShadowRecord, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidObservable(format!(
            "correlation needs two distinct sites, got {i} twice"
        )));
    }
    record.check_sites(&[i, j])?;
    let total: f64 = (0..record.len())
        .map(|t| {
            if record.basis(t, i) == record.basis(t, j) {
                9.0 * record.outcome(t, i) * record.outcome(t, j)
            } else {
                0.0
            }
        })
        .sum();
    Ok(total / (3.0 * record.len() as f64))
}
