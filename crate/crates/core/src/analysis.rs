//! Entanglement bookkeeping for the channels and the teleportable plane.
//!
//! Distillability of a two-qubit reduced channel is reported through the
//! partial-transpose criterion: for two qubits a negative partial
//! transpose is assumed equivalent to distillable entanglement.

use crate::protocol_math::OverlapFrame;
use crate::protocols::{ChannelSpec, ProtocolError, ProtocolResult};
use crate::qstate::{entanglement_entropy, negativity, partial_trace, schmidt, Label, QubitVector, StateVector, C64};

/// Negativities of the reduced channels between Alice and each Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    /// `N(ρ_{A B2})`
    pub alice_bob2: f64,
    /// `N(ρ_{A B1})`
    pub alice_bob1: f64,
}

impl NegativityReport {
    /// Positive negativity on the Alice–Bob2 pair.
    pub fn alice_bob2_distillable(&self, tol: f64) -> bool {
        self.alice_bob2 > tol
    }
}

/// Negativities of `ρ_{A B2}` and `ρ_{A B1}` for a two-Bob channel.
pub fn channel_negativity_report(channel: &ChannelSpec) -> ProtocolResult<NegativityReport> {
    if channel.n() != 2 {
        return Err(ProtocolError::Config(format!(
            "negativity report covers two-Bob channels, got {}",
            channel.n()
        )));
    }
    let state = channel.state()?;
    let pair = |bob: &str| -> ProtocolResult<f64> {
        let rho = partial_trace(&state, &[Label::new("A"), Label::new(bob)])?;
        Ok(negativity(&rho)?)
    };
    Ok(NegativityReport { alice_bob2: pair("B2")?, alice_bob1: pair("B1")? })
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entanglement_entropy(&[p.max(0.0).sqrt(), (1.0 - p).max(0.0).sqrt()])
}

/// `H((1 + r)/2)`, the largest entanglement in the plane of `frame`.
pub fn closed_form_max(r: f64) -> f64 {
    binary_entropy((1.0 + r) / 2.0)
}

/// Entanglement entropy between qubit 1 and qubit 2 of
/// `√p|φ0⟩ + √(1−p)|φ'1⟩`. Phases of the coefficients and the choice of
/// `{|0'⟩, |1'⟩}` do not change it.
pub fn plane_entropy(frame: &OverlapFrame, p: f64) -> f64 {
    let alpha = C64::new(p.clamp(0.0, 1.0).sqrt(), 0.0);
    let beta = C64::new((1.0 - p).clamp(0.0, 1.0).sqrt(), 0.0);
    let x = StateVector::product(["1", "2"], &[frame.phi, QubitVector::zero()]).expect("two factors");
    let y = StateVector::product(["1", "2"], &[frame.phi_prime, QubitVector::one()]).expect("two factors");
    let amps = x.amplitudes().iter().zip(y.amplitudes()).map(|(u, v)| alpha * u + beta * v).collect();
    let state = StateVector::new(["1", "2"], amps).expect("orthogonal last factors keep the norm");
    entanglement_entropy(&schmidt(&state, &[Label::new("1")]).expect("valid split"))
}

/// Grid search of the entanglement over the teleportable plane.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementRange {
    /// `(|α|², E)` pairs on the grid.
    pub curve: Vec<(f64, f64)>,
    pub e_max: f64,
    /// `|α|²` at which the maximum is reached.
    pub argmax_alpha2: f64,
    /// `H((1 + r)/2)`
    pub closed_form: f64,
}

/// Evaluates [`plane_entropy`] on `points` evenly spaced values of `|α|²`
/// in `[0, 1]` (at least 101).
pub fn teleportable_entanglement_range(frame: &OverlapFrame, points: usize) -> ProtocolResult<EntanglementRange> {
    if points < 101 {
        return Err(ProtocolError::Config(format!("grid needs at least 101 points, got {points}")));
    }
    let curve: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let p = i as f64 / (points - 1) as f64;
            (p, plane_entropy(frame, p))
        })
        .collect();
    let (argmax_alpha2, e_max) = curve
        .iter()
        .copied()
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(EntanglementRange { curve, e_max, argmax_alpha2, closed_form: closed_form_max(frame.r) })
}
