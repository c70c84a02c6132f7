//! Exact-diagonalization engine: Pauli operators, sparse Hamiltonians, a
//! Lanczos ground-state solver and state-level measurements.

pub mod lanczos;
pub mod pauli;
pub mod sparse;
pub mod state;

pub use lanczos::{ground_state, solve_model, GroundStateSolution, LanczosOptions};
pub use pauli::{LocalOperator, Pauli, PauliString};
pub use sparse::{build_hamiltonian, build_hamiltonian_capped, SparseOperator, DEFAULT_QUBIT_CAP};
pub use state::{
    apply_permutation, expectation_local, expectation_observable, expectation_pauli,
    num_qubits, reduced_density_matrix,
};
