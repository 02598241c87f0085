use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::qstate::{MeasurementBasis, C64};

use super::frame::OverlapFrame;
use super::{MathError, MathResult};

/// Outcome of a Bell measurement, in basis order φ⁺, φ⁻, ψ⁺, ψ⁻.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] =
        [BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus, BellOutcome::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> MathResult<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| MathError::Domain(format!("Bell outcome index {i}")))
    }

    /// ψ outcomes carry a bit flip between the two measured qubits.
    pub fn is_psi(self) -> bool {
        matches!(self, BellOutcome::PsiPlus | BellOutcome::PsiMinus)
    }

    /// 1 for the minus-sign outcomes.
    pub fn sign_bit(self) -> bool {
        matches!(self, BellOutcome::PhiMinus | BellOutcome::PsiMinus)
    }

    pub fn name(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a Claire measurement in her `{|a⟩, |ā⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaireOutcome {
    A,
    ABar,
}

impl ClaireOutcome {
    pub const ALL: [ClaireOutcome; 2] = [ClaireOutcome::A, ClaireOutcome::ABar];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> MathResult<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| MathError::Domain(format!("Claire outcome index {i}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            ClaireOutcome::A => "a",
            ClaireOutcome::ABar => "abar",
        }
    }
}

impl fmt::Display for ClaireOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of the five-projector GHZ-basis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GhzOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    Complement,
}

impl GhzOutcome {
    pub const ALL: [GhzOutcome; 5] = [
        GhzOutcome::PhiPlus,
        GhzOutcome::PhiMinus,
        GhzOutcome::PsiPlus,
        GhzOutcome::PsiMinus,
        GhzOutcome::Complement,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> MathResult<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| MathError::Domain(format!("GHZ outcome index {i}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            GhzOutcome::PhiPlus => "phi+ghz",
            GhzOutcome::PhiMinus => "phi-ghz",
            GhzOutcome::PsiPlus => "psi+ghz",
            GhzOutcome::PsiMinus => "psi-ghz",
            GhzOutcome::Complement => "P5",
        }
    }
}

impl fmt::Display for GhzOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn sparse(dim: usize, entries: &[(usize, f64)]) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    for &(i, x) in entries {
        v[i] = C64::new(x, 0.0);
    }
    v
}

/// φ⁺ = (|00⟩+|11⟩)/√2, φ⁻ = (|00⟩−|11⟩)/√2, ψ⁺ = (|01⟩+|10⟩)/√2,
/// ψ⁻ = (|01⟩−|10⟩)/√2.
pub fn bell_basis() -> MeasurementBasis {
    let h = FRAC_1_SQRT_2;
    let elements = vec![
        (BellOutcome::PhiPlus.name().into(), sparse(4, &[(0b00, h), (0b11, h)])),
        (BellOutcome::PhiMinus.name().into(), sparse(4, &[(0b00, h), (0b11, -h)])),
        (BellOutcome::PsiPlus.name().into(), sparse(4, &[(0b01, h), (0b10, h)])),
        (BellOutcome::PsiMinus.name().into(), sparse(4, &[(0b01, h), (0b10, -h)])),
    ];
    MeasurementBasis::new("bell", 2, elements, None).expect("Bell basis is orthonormal")
}

/// The four GHZ-type states (|000⟩±|111⟩)/√2, (|001⟩±|110⟩)/√2 plus the
/// rank-4 complement projector.
pub fn ghz_basis() -> MeasurementBasis {
    let h = FRAC_1_SQRT_2;
    let elements = vec![
        (GhzOutcome::PhiPlus.name().into(), sparse(8, &[(0b000, h), (0b111, h)])),
        (GhzOutcome::PhiMinus.name().into(), sparse(8, &[(0b000, h), (0b111, -h)])),
        (GhzOutcome::PsiPlus.name().into(), sparse(8, &[(0b001, h), (0b110, h)])),
        (GhzOutcome::PsiMinus.name().into(), sparse(8, &[(0b001, h), (0b110, -h)])),
    ];
    MeasurementBasis::new("ghz", 3, elements, Some(GhzOutcome::Complement.name().into()))
        .expect("GHZ basis is orthonormal")
}

/// Claire's single-qubit basis `{|a⟩, |ā⟩}` for `frame`.
pub fn frame_basis(name: impl Into<String>, frame: &OverlapFrame) -> MathResult<MeasurementBasis> {
    let elements = vec![
        (ClaireOutcome::A.name().into(), frame.a.amplitudes().to_vec()),
        (ClaireOutcome::ABar.name().into(), frame.a_bar.amplitudes().to_vec()),
    ];
    Ok(MeasurementBasis::new(name, 1, elements, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn bell_phi_plus_amplitudes() {
        let b = bell_basis();
        let e = &b.elements()[0];
        assert!((e[0].re - FRAC_1_SQRT_2).abs() < 1e-16 && (e[3].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!(e[1].norm() == 0.0 && e[2].norm() == 0.0);
    }

    #[test]
    fn bell_projectors_resolve_identity() {
        let b = bell_basis();
        let sum = (0..4).fold(DMatrix::<C64>::zeros(4, 4), |acc, k| acc + b.projector(k));
        let defect = (sum - DMatrix::<C64>::identity(4, 4)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(defect < 1e-14);
        for i in 0..4 {
            for j in 0..i {
                let ip: C64 = b.elements()[i].iter().zip(&b.elements()[j]).map(|(x, y)| x.conj() * y).sum();
                assert!(ip.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn ghz_basis_complement() {
        let b = ghz_basis();
        assert_eq!(b.num_outcomes(), 5);
        let e = &b.elements()[0];
        assert!((e[0b000].re - FRAC_1_SQRT_2).abs() < 1e-16 && (e[0b111].re - FRAC_1_SQRT_2).abs() < 1e-16);

        let p5 = b.projector(4);
        assert!((p5.trace() - C64::new(4.0, 0.0)).norm() < 1e-14);
        for e in b.elements() {
            let v = nalgebra::DVector::from_column_slice(e);
            assert!((&p5 * v).iter().all(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn outcome_bits() {
        assert!(!BellOutcome::PhiPlus.is_psi() && !BellOutcome::PhiPlus.sign_bit());
        assert!(BellOutcome::PsiMinus.is_psi() && BellOutcome::PsiMinus.sign_bit());
        assert_eq!(BellOutcome::from_index(2).unwrap(), BellOutcome::PsiPlus);
        assert!(GhzOutcome::from_index(5).is_err());
    }
}
