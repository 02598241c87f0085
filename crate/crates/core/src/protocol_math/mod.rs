//! Measurement bases, the overlap frame of a non-orthogonal pair, the local
//! unitaries the protocols use, outcome-conditioned correction tables and
//! the filtering measurement for unbalanced channels.

mod bases;
mod corrections;
mod filter;
mod frame;

pub use bases::{bell_basis, frame_basis, ghz_basis, BellOutcome, ClaireOutcome, GhzOutcome};
pub use corrections::{cat_correction, ghz_class_correction, ghz_correction, CorrectionAction};
pub use filter::{filter_measurement, FilterMeasurement};
pub use frame::{
    gauge_unitaries, inverse_gauge, overlap_frame, restore_unitaries, swap_unitary, OverlapFrame,
    SchmidtFrame,
};

use thiserror::Error;

use crate::qstate::StateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MathError {
    #[error(transparent)]
    State(#[from] StateError),

    #[error("protocol failure: outcome {0} cannot occur for inputs in the teleportable set")]
    Unreachable(String),

    #[error("degenerate channel: weights a = {a}, b = {b} leave no entanglement to teleport with")]
    DegenerateChannel { a: String, b: String },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type MathResult<T> = Result<T, MathError>;
