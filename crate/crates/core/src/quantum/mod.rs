//! Exact finite-dimensional quantum mechanics for small qubit registers.
//!
//! Pauli algebra, k-local Hamiltonians over a [`Topology`], dense ground
//! states, reduced density matrices, local expectations, and the two
//! fidelity measures used for evaluation.

pub mod eigen;
pub mod fidelity;
pub mod hamiltonian;
pub mod measure;
pub mod operator;
pub mod pauli;
pub mod state;
pub mod topology;

pub use fidelity::{fidelity_f1, fidelity_f2};
pub use hamiltonian::{build_hamiltonian, project_to_coeffs};
pub use measure::measure_local;
pub use operator::Operator;
pub use pauli::{build_basis_element, PauliLabel, PauliString};
pub use state::{ground_state, partial_trace, DensityMatrix, PureState, DEFAULT_GAP_TOL};
pub use topology::{CoeffVector, MeasurementVector, TermLabel, Topology, TopologyKind};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid Pauli labels: {0}")]
    InvalidLabels(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("entry {index} = {value} lies outside [-1, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("degenerate ground state (gap {gap:.3e})")]
    DegenerateGroundState { gap: f64 },
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    BadTrace(f64),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("qubit pair ({i}, {j}) invalid for {n} qubits")]
    QubitOutOfRange { i: usize, j: usize, n: usize },
    #[error("expectation value has imaginary part {0:.3e}")]
    ComplexExpectation(f64),
    #[error("zero Hilbert-Schmidt norm")]
    ZeroNorm,
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
}
