//! Multi-party execution of protocol scripts under the LOCC discipline.
//!
//! A [`Protocol`] is data: an initial joint state, the parties owning its
//! qubits, an ordered list of [`Step`]s and the state the Bobs should end
//! up with. The engine expands every measurement into all of its outcomes
//! (or samples one, reproducibly from a seed) and records a [`Transcript`]
//! of local operations, measurements and classical messages per branch.

mod engine;
mod order;
mod party;
mod script;
mod transcript;

pub use engine::{enumerate, run_protocol, sample, Branch, Mode, OutcomeRecord, RunOutput, Sampler};
pub use order::{compare_orderings, OrderReport};
pub use party::{Party, Role};
pub use script::{CorrectionTable, MeasurementKind, Phase, Protocol, Step};
pub use transcript::{validate_locality, ClassicalMessage, Event, LocalityReport, Transcript, Violation};

use thiserror::Error;

use crate::qstate::StateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoccError {
    #[error(transparent)]
    State(#[from] StateError),

    #[error("locality violation at step {}: {}", .0.event, .0.description)]
    Locality(Violation),

    #[error("no correction for outcomes ({outcomes}) at step {step}")]
    MissingCorrection { step: usize, outcomes: String },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type LoccResult<T> = Result<T, LoccError>;

/// Bits needed to name one of `alphabet` outcomes.
pub fn bits_for(alphabet: usize) -> u32 {
    if alphabet <= 1 {
        0
    } else {
        usize::BITS - (alphabet - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::bits_for;

    #[test]
    fn message_sizes() {
        assert_eq!(bits_for(2), 1);
        assert_eq!(bits_for(4), 2);
        assert_eq!(bits_for(5), 3);
        assert_eq!(bits_for(1), 0);
    }
}
