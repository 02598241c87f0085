//! Dense state-vector and density-matrix core.
//!
//! Every multi-qubit object carries an ordered list of qubit labels. The
//! first label is the most significant bit of the amplitude index, so for
//! labels `[x, y]` the amplitude of `|x=1, y=0⟩` sits at index `0b10 = 2`.
//! All decompositions, measurement bases and reports follow this order.

mod density;
mod gate;
mod index;
mod measure;
mod schmidt;
mod state;

pub use density::{negativity, partial_trace, DensityMatrix, Reducible};
pub use gate::{Operator, SingleQubitGate};
pub use measure::{measure, measure_generalized, MeasurementBasis, MeasurementOutcome};
pub use schmidt::{entanglement_entropy, fidelity, schmidt, subsystem_fidelity};
pub use state::{tensor, Label, QubitVector, StateVector};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Tolerance on unit norm, unitarity, orthonormality and trace.
pub const NORM_TOL: f64 = 1e-12;
/// Outcomes below this probability are reported without a post-state.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Most negative eigenvalue a density matrix may have.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Squared Schmidt coefficients below this do not contribute to entropy.
pub const ENTROPY_FLOOR: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("composition error: label {0:?} appears more than once")]
    DuplicateLabel(String),

    #[error("addressing error: no qubit labelled {0:?}")]
    UnknownLabel(String),

    #[error("amplitude vector of length {len} does not match {qubits} qubits")]
    Dimension { len: usize, qubits: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("basis error: {0}")]
    Basis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}

pub type StateResult<T> = Result<T, StateError>;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
