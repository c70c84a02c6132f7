//! Learning ground-state properties across a gapped phase of an
//! equivariant spin chain from a single ground state.
//!
//! The lattice symmetry group turns one ground state into `|G|` training
//! rows per orbit class of observable supports. A random-Fourier-feature
//! LASSO model per class then predicts the local expectation values at new
//! parameters, and summing them predicts the full observable.
//!
//! Modules:
//! - [`lattice`]: dihedral group of the ring, orbits of site sets
//! - [`models`]: Heisenberg and long-range Ising rings, observables
//! - [`quantum`]: sparse Hamiltonians, Lanczos ground states, RDMs
//! - [`shadows`]: randomized Pauli measurements and shadow estimators
//! - [`learn`]: orbit datasets, feature maps, LASSO, prediction
//! - [`theory`]: sample-complexity exponent, Lambert W, error bounds
//! - [`harness`]: scaling sweeps, baselines and CSV/JSON output

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod lattice;
pub mod learn;
pub mod models;
pub mod quantum;
pub mod shadows;
pub mod theory;

pub use error::{Error, Result};
