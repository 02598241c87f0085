use crate::qstate::{SingleQubitGate, C64};

use super::bases::{BellOutcome, ClaireOutcome, GhzOutcome};
use super::frame::{swap_unitary, OverlapFrame};
use super::{MathError, MathResult};

/// One single-qubit gate per Bob, in Bob order. Corrections are always
/// products of strictly local gates.
#[derive(Debug, Clone)]
pub struct CorrectionAction {
    pub gates: Vec<SingleQubitGate>,
}

impl CorrectionAction {
    pub fn identity(bobs: usize) -> Self {
        CorrectionAction { gates: vec![SingleQubitGate::identity(); bobs] }
    }

    pub fn is_identity(&self) -> bool {
        self.gates.iter().all(|g| g.distance(&SingleQubitGate::identity()) < 1e-15)
    }

    /// Gate names joined as a tensor product, e.g. `U''⊗X`.
    pub fn describe(&self) -> String {
        self.gates.iter().map(|g| g.name().to_owned()).collect::<Vec<_>>().join("⊗")
    }
}

fn z_then_x() -> SingleQubitGate {
    // σz·σx = iσy
    SingleQubitGate::pauli_z().compose(&SingleQubitGate::pauli_x()).renamed("ZX")
}

/// Correction table of the GHZ-channel protocol, indexed by the GHZ-basis
/// outcome on Alice's three qubits. Gates are `(Bob1, Bob2)`.
pub fn ghz_correction(outcome: GhzOutcome) -> MathResult<CorrectionAction> {
    let i = SingleQubitGate::identity;
    let x = SingleQubitGate::pauli_x;
    let z = SingleQubitGate::pauli_z;
    let gates = match outcome {
        GhzOutcome::PhiPlus => vec![i(), i()],
        GhzOutcome::PhiMinus => vec![z(), i()],
        GhzOutcome::PsiPlus => vec![x(), x()],
        GhzOutcome::PsiMinus => {
            let iy = SingleQubitGate::pauli_y().scaled(C64::new(0.0, 1.0)).renamed("iY");
            vec![x(), iy]
        }
        GhzOutcome::Complement => return Err(MathError::Unreachable(outcome.name().into())),
    };
    Ok(CorrectionAction { gates })
}

/// Correction of the three-party GHZ-class protocol for a Bell outcome on
/// Alice's qubits and Claire's `{a, ā}` outcome. Gates are `(Bob1, Bob2)`.
///
/// The conditional Bob states, before correction, are
///
/// ```text
/// (φ⁺, a)  α|φ0⟩ + β|φ''1⟩       (φ⁺, ā)  α|φ0⟩ − β|φ''1⟩
/// (φ⁻, a)  α|φ0⟩ − β|φ''1⟩       (φ⁻, ā)  α|φ0⟩ + β|φ''1⟩
/// (ψ⁺, a)  α|φ''1⟩ + β|φ0⟩       (ψ⁺, ā)  α|φ''1⟩ − β|φ0⟩
/// (ψ⁻, a)  α|φ''1⟩ − β|φ0⟩       (ψ⁻, ā)  α|φ''1⟩ + β|φ0⟩
/// ```
///
/// so the ψ rows need `U''` on Bob1 and a bit flip on Bob2 in addition to
/// the sign fix.
pub fn ghz_class_correction(
    bell: BellOutcome,
    claire: ClaireOutcome,
    frame: &OverlapFrame,
) -> CorrectionAction {
    use BellOutcome::*;
    use ClaireOutcome::*;
    let i = SingleQubitGate::identity;
    let x = SingleQubitGate::pauli_x;
    let z = SingleQubitGate::pauli_z;
    let swap = || swap_unitary(frame);
    let gates = match (bell, claire) {
        (PhiPlus, A) => vec![i(), i()],
        (PhiPlus, ABar) => vec![i(), z()],
        (PhiMinus, A) => vec![i(), z()],
        (PhiMinus, ABar) => vec![i(), i()],
        (PsiPlus, A) => vec![swap(), x()],
        (PsiPlus, ABar) => vec![swap(), z_then_x()],
        (PsiMinus, A) => vec![swap(), z_then_x()],
        (PsiMinus, ABar) => vec![swap(), x()],
    };
    CorrectionAction { gates }
}

/// Correction of the `N`-party cat-channel protocol. `claires` holds the
/// outcomes of Claire1..Claire(N−1) and `frames` their overlap frames.
///
/// Bob_i (`i < N`) applies `U''ᵢ` iff the Bell outcome is ψ±. Bob_N
/// applies σx iff the Bell outcome is ψ±, then σz iff the Bell sign bit
/// differs from the parity of the number of `ā` results.
pub fn cat_correction(
    bell: BellOutcome,
    claires: &[ClaireOutcome],
    frames: &[OverlapFrame],
) -> MathResult<CorrectionAction> {
    if claires.len() != frames.len() {
        return Err(MathError::Domain(format!(
            "{} Claire outcomes for {} overlap frames",
            claires.len(),
            frames.len()
        )));
    }
    if frames.is_empty() {
        return Err(MathError::Domain("cat protocol needs at least one Claire".into()));
    }
    let mut gates: Vec<SingleQubitGate> = frames
        .iter()
        .map(|f| if bell.is_psi() { swap_unitary(f) } else { SingleQubitGate::identity() })
        .collect();
    let parity = claires.iter().filter(|&&c| c == ClaireOutcome::ABar).count() % 2 == 1;
    let flip_sign = bell.sign_bit() ^ parity;
    let last = match (bell.is_psi(), flip_sign) {
        (false, false) => SingleQubitGate::identity(),
        (false, true) => SingleQubitGate::pauli_z(),
        (true, false) => SingleQubitGate::pauli_x(),
        (true, true) => z_then_x(),
    };
    gates.push(last);
    Ok(CorrectionAction { gates })
}
