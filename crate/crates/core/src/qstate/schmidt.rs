use nalgebra::DMatrix;

use super::index::Split;
use super::state::{Label, StateVector};
use super::{StateError, StateResult, C64, ENTROPY_FLOOR};

/// `|⟨target|state⟩|²`, after reordering `target` to the label order of
/// `state`. Insensitive to global phase on either argument.
pub fn fidelity(state: &StateVector, target: &StateVector) -> StateResult<f64> {
    let mut a: Vec<&Label> = state.labels().iter().collect();
    let mut b: Vec<&Label> = target.labels().iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(StateError::Domain("fidelity between states on different qubits".into()));
    }
    let target = target.permuted(state.labels())?;
    Ok(target.inner(state)?.norm_sqr().min(1.0))
}

/// `⟨target|ρ|target⟩` where `ρ` is the reduced state of `state` on the
/// labels of `target`. Summed slice by slice over the traced qubits, so
/// `ρ` is never formed.
pub fn subsystem_fidelity(state: &StateVector, target: &StateVector) -> StateResult<f64> {
    let positions = state.positions(target.labels())?;
    let split = Split::new(state.num_qubits(), &positions);
    let t = target.amplitudes();
    let total: f64 = (0..split.rest_dim())
        .map(|r| {
            (0..split.target_dim())
                .map(|i| t[i].conj() * state.amplitude(split.index(i, r)))
                .sum::<C64>()
                .norm_sqr()
        })
        .sum();
    Ok(total.clamp(0.0, 1.0))
}

/// Schmidt coefficients of `state` across `side : rest`, in descending
/// order. There are `min(2^|side|, 2^|rest|)` of them.
pub fn schmidt(state: &StateVector, side: &[Label]) -> StateResult<Vec<f64>> {
    let positions = state.positions(side)?;
    let split = Split::new(state.num_qubits(), &positions);
    let (rows, cols) = (split.target_dim(), split.rest_dim());
    let m = DMatrix::from_fn(rows, cols, |t, r| state.amplitude(split.index(t, r)));
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().cloned().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Von Neumann entropy in bits of the reduced state with Schmidt
/// coefficients `coefficients`.
pub fn entanglement_entropy(coefficients: &[f64]) -> f64 {
    coefficients
        .iter()
        .map(|l| l * l)
        .filter(|&p| p >= ENTROPY_FLOOR)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::state::labels;
    use crate::qstate::{c, tensor, QubitVector};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn fidelity_basics() {
        let psi = StateVector::normalized(["x"], vec![c(0.3, 0.1), c(-0.2, 0.9)]).unwrap();
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-15);
        let shifted = psi.scaled(num_complex::Complex64::from_polar(1.0, 2.1));
        assert!((fidelity(&psi, &shifted).unwrap() - 1.0).abs() < 1e-15);

        let t = 0.37f64;
        let zero = StateVector::basis(["x"], &[0]).unwrap();
        let rot = StateVector::new(["x"], vec![c(t.cos(), 0.0), c(t.sin(), 0.0)]).unwrap();
        assert!((fidelity(&zero, &rot).unwrap() - t.cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn fidelity_reorders_and_rejects_mismatch() {
        let a = StateVector::basis(["x", "y"], &[1, 0]).unwrap();
        let b = StateVector::basis(["y", "x"], &[0, 1]).unwrap();
        assert!((fidelity(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        let z = StateVector::basis(["x", "z"], &[1, 0]).unwrap();
        assert!(matches!(fidelity(&a, &z), Err(StateError::Domain(_))));
    }

    #[test]
    fn schmidt_bell_and_product() {
        let bell = StateVector::normalized(["x", "y"], vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let s = schmidt(&bell, &labels(["x"])).unwrap();
        assert!(s.iter().all(|v| (v - FRAC_1_SQRT_2).abs() < 1e-12));
        assert!((entanglement_entropy(&s) - 1.0).abs() < 1e-12);

        let prod = tensor(&[QubitVector::plus().to_state("x"), QubitVector::one().to_state("y")]).unwrap();
        let s = schmidt(&prod, &labels(["y"])).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-12);
        assert_eq!(entanglement_entropy(&s), 0.0);
    }

    #[test]
    fn entropy_of_quarter_split() {
        // binary entropy H(0.75)
        let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        let e = entanglement_entropy(&[0.75f64.sqrt(), 0.5]);
        assert!((e - h).abs() < 1e-14);
        assert!((e - 0.811_278_124_459_132_9).abs() < 1e-12);
    }
}
