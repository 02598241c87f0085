//! Protocol scripts for teleporting a state from the known plane
//! `α|x⟩ + β|y⟩` to the Bobs.
//!
//! | family     | channel                                   | parties                  |
//! |------------|-------------------------------------------|--------------------------|
//! | `Ghz`      | `a|000⟩ + b|111⟩`                          | Alice, Bob1, Bob2        |
//! | `GhzClass` | `a|0φ0⟩ + b|1φ'1⟩`                         | Alice, Claire1, two Bobs |
//! | `Cat`      | `a|0φ₁…φ_{N−1}0⟩ + b|1φ'₁…φ'_{N−1}1⟩`      | Alice, N−1 Claires, N Bobs |
//!
//! Balanced channels (`a = b = 1/√2`) run the deterministic scripts.
//! Unbalanced ones go through [`probabilistic_script`], which puts a local
//! filter on Alice's channel qubit in front of the deterministic script.
//!
//! Qubit labels: `"1"…"N"` for the input (Claire_i holds `"i"`, Alice
//! holds `"N"`), `"A"` for Alice's channel qubit and `"B1"…"BN"` for the
//! Bobs. In the GHZ family Alice holds both input qubits.

mod input;
mod scripts;

pub use input::{
    bob_labels, build_initial_state, channel_labels, input_labels, ChannelFamily, ChannelSpec,
    InputFrame, TeleportInput,
};
pub use scripts::{
    cat_protocol, cat_script, ghz_class_protocol, ghz_class_script, ghz_protocol, ghz_script,
    order_permutation_check, probabilistic_protocol, probabilistic_script, script_for,
    MeasurementOrder, ALICE_BELL, ALICE_GHZ, FILTER,
};

use thiserror::Error;

use crate::locc::LoccError;
use crate::protocol_math::MathError;
use crate::qstate::StateError;

/// Largest number of Bobs a cat script is built for.
pub const MAX_BOBS: usize = 8;

/// Tolerance for matching the input's product vectors against the channel.
pub const MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Math(#[from] MathError),

    #[error(transparent)]
    Locc(#[from] LoccError),

    #[error(transparent)]
    State(#[from] StateError),
}

pub type ProtocolResult<T> = Result<T, ProtocolError>;
