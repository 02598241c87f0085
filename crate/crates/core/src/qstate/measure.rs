use nalgebra::DMatrix;

use super::gate::Operator;
use super::index::Split;
use super::state::{Label, StateVector};
use super::{c, StateError, StateResult, C64, NORM_TOL, ZERO_PROBABILITY};

/// Orthonormal vectors on `num_qubits` qubits defining a projective
/// measurement. If the vectors do not span the space, `complement` must be
/// set and the projector `I − Σ|e⟩⟨e|` is appended as the last outcome.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    name: String,
    num_qubits: usize,
    elements: Vec<Vec<C64>>,
    outcome_names: Vec<String>,
    complement: bool,
}

impl MeasurementBasis {
    pub fn new(
        name: impl Into<String>,
        num_qubits: usize,
        elements: Vec<(String, Vec<C64>)>,
        complement: Option<String>,
    ) -> StateResult<Self> {
        let dim = 1usize << num_qubits;
        let (mut outcome_names, elements): (Vec<String>, Vec<Vec<C64>>) = elements.into_iter().unzip();
        if elements.is_empty() {
            return Err(StateError::Basis("no basis elements".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if e.len() != dim {
                return Err(StateError::Basis(format!(
                    "element {i} has length {} but the basis acts on {num_qubits} qubits",
                    e.len()
                )));
            }
            for (j, f) in elements[..=i].iter().enumerate() {
                let ip: C64 = f.iter().zip(e).map(|(x, y)| x.conj() * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - c(expect, 0.0)).norm() > NORM_TOL {
                    return Err(StateError::Basis(format!(
                        "elements {j} and {i} have inner product {ip}, expected {expect}"
                    )));
                }
            }
        }
        let spans = elements.len() == dim;
        match (&complement, spans) {
            (None, false) => {
                return Err(StateError::Basis(format!(
                    "{} elements do not span {dim} dimensions and no complement was requested",
                    elements.len()
                )))
            }
            (Some(_), true) => {
                return Err(StateError::Basis("complement requested for a spanning basis".into()))
            }
            _ => {}
        }
        let has_complement = complement.is_some();
        outcome_names.extend(complement);
        Ok(MeasurementBasis {
            name: name.into(),
            num_qubits,
            elements,
            outcome_names,
            complement: has_complement,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn elements(&self) -> &[Vec<C64>] {
        &self.elements
    }

    pub fn has_complement(&self) -> bool {
        self.complement
    }

    /// Number of outcomes, including the complement if present.
    pub fn num_outcomes(&self) -> usize {
        self.outcome_names.len()
    }

    /// Number of listed elements, excluding the complement.
    pub fn num_listed(&self) -> usize {
        self.elements.len()
    }

    pub fn outcome_name(&self, index: usize) -> &str {
        &self.outcome_names[index]
    }

    pub fn outcome_names(&self) -> &[String] {
        &self.outcome_names
    }

    /// Projector for `outcome` as a dense matrix.
    pub fn projector(&self, outcome: usize) -> DMatrix<C64> {
        let dim = 1usize << self.num_qubits;
        let outer = |e: &[C64]| DMatrix::from_fn(dim, dim, |r, col| e[r] * e[col].conj());
        if outcome < self.elements.len() {
            outer(&self.elements[outcome])
        } else {
            self.elements
                .iter()
                .fold(DMatrix::identity(dim, dim), |acc, e| acc - outer(e))
        }
    }
}

/// One outcome of a measurement. `state` is `None` when the outcome
/// probability is below the zero-probability threshold.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub index: usize,
    pub name: String,
    pub probability: f64,
    pub state: Option<StateVector>,
}

fn check_targets(state: &StateVector, targets: &[Label], num_qubits: usize) -> StateResult<Vec<usize>> {
    if targets.len() != num_qubits {
        return Err(StateError::Basis(format!(
            "basis acts on {num_qubits} qubits but {} targets were given",
            targets.len()
        )));
    }
    state.positions(targets)
}

fn outcome(index: usize, name: &str, labels: &[Label], raw: Vec<C64>) -> MeasurementOutcome {
    let p: f64 = raw.iter().map(C64::norm_sqr).sum();
    let state = (p >= ZERO_PROBABILITY).then(|| {
        let n = p.sqrt();
        StateVector::from_parts(labels.to_vec(), raw.into_iter().map(|a| a / n).collect())
    });
    MeasurementOutcome { index, name: name.to_owned(), probability: p, state }
}

/// Projective measurement of `targets` in `basis`; every outcome is
/// returned, in basis order.
pub fn measure(
    state: &StateVector,
    targets: &[Label],
    basis: &MeasurementBasis,
) -> StateResult<Vec<MeasurementOutcome>> {
    let positions = check_targets(state, targets, basis.num_qubits)?;
    let split = Split::new(state.num_qubits(), &positions);
    let amps = state.amplitudes();
    let labels = state.labels();

    let mut projected: Vec<Vec<C64>> = Vec::with_capacity(basis.elements.len());
    for e in &basis.elements {
        let mut raw = vec![c(0.0, 0.0); amps.len()];
        for r in 0..split.rest_dim() {
            let overlap: C64 = e
                .iter()
                .enumerate()
                .map(|(t, et)| et.conj() * amps[split.index(t, r)])
                .sum();
            for (t, et) in e.iter().enumerate() {
                raw[split.index(t, r)] = et * overlap;
            }
        }
        projected.push(raw);
    }

    let mut outcomes: Vec<MeasurementOutcome> = Vec::with_capacity(basis.num_outcomes());
    if basis.complement {
        let mut rest = amps.to_vec();
        for p in &projected {
            for (x, y) in rest.iter_mut().zip(p) {
                *x -= y;
            }
        }
        let idx = basis.elements.len();
        let last = outcome(idx, &basis.outcome_names[idx], labels, rest);
        for (i, raw) in projected.into_iter().enumerate() {
            outcomes.push(outcome(i, &basis.outcome_names[i], labels, raw));
        }
        outcomes.push(last);
    } else {
        for (i, raw) in projected.into_iter().enumerate() {
            outcomes.push(outcome(i, &basis.outcome_names[i], labels, raw));
        }
    }
    Ok(outcomes)
}

/// Generalized measurement with Kraus operators `kraus` on `targets`.
/// The operators must satisfy `Σ K†K = I` within tolerance.
pub fn measure_generalized(
    state: &StateVector,
    targets: &[Label],
    kraus: &[Operator],
) -> StateResult<Vec<MeasurementOutcome>> {
    let first = kraus
        .first()
        .ok_or_else(|| StateError::Basis("no Kraus operators".into()))?;
    let dim = first.matrix().nrows();
    let mut sum = DMatrix::<C64>::zeros(dim, dim);
    for k in kraus {
        if k.matrix().nrows() != dim {
            return Err(StateError::Basis("Kraus operators of different dimensions".into()));
        }
        sum += k.matrix().adjoint() * k.matrix();
    }
    let defect = (sum - DMatrix::<C64>::identity(dim, dim))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if defect > NORM_TOL {
        return Err(StateError::Basis(format!("Kraus operators are incomplete (defect {defect:e})")));
    }
    check_targets(state, targets, first.num_qubits())?;
    kraus
        .iter()
        .enumerate()
        .map(|(i, k)| Ok(outcome(i, k.name(), state.labels(), k.apply_raw(state, targets)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn z_basis() -> MeasurementBasis {
        MeasurementBasis::new(
            "Z",
            1,
            vec![
                ("0".into(), vec![c(1.0, 0.0), c(0.0, 0.0)]),
                ("1".into(), vec![c(0.0, 0.0), c(1.0, 0.0)]),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_orthonormal() {
        let err = MeasurementBasis::new(
            "bad",
            1,
            vec![
                ("0".into(), vec![c(1.0, 0.0), c(0.0, 0.0)]),
                ("+".into(), vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]),
            ],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, StateError::Basis(_)));
    }

    #[test]
    fn rejects_incomplete_without_complement() {
        let err = MeasurementBasis::new("half", 1, vec![("0".into(), vec![c(1.0, 0.0), c(0.0, 0.0)])], None)
            .unwrap_err();
        assert!(matches!(err, StateError::Basis(_)));
    }

    #[test]
    fn plus_state_in_z_basis() {
        let s = StateVector::normalized(["q", "r"], vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let out = measure(&s, &["q".into()], &z_basis()).unwrap();
        assert_eq!(out.len(), 2);
        for o in &out {
            assert!((o.probability - 0.5).abs() < 1e-15);
        }
        assert_eq!(out[1].state.as_ref().unwrap(), &StateVector::basis(["q", "r"], &[1, 0]).unwrap());
    }

    #[test]
    fn zero_probability_outcome_has_no_state() {
        let s = StateVector::basis(["q"], &[0]).unwrap();
        let out = measure(&s, &["q".into()], &z_basis()).unwrap();
        assert!(out[1].probability < 1e-30);
        assert!(out[1].state.is_none());
    }

    #[test]
    fn complement_outcome_catches_the_rest() {
        let basis = MeasurementBasis::new(
            "half",
            1,
            vec![("0".into(), vec![c(1.0, 0.0), c(0.0, 0.0)])],
            Some("rest".into()),
        )
        .unwrap();
        assert_eq!(basis.num_outcomes(), 2);
        let p = basis.projector(1);
        assert!((p[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        let s = StateVector::normalized(["q"], vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let out = measure(&s, &["q".into()], &basis).unwrap();
        assert_eq!(out[1].name, "rest");
        assert!((out[1].probability - 0.5).abs() < 1e-15);
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let k = Operator::new("half", DMatrix::from_diagonal_element(2, 2, c(0.5, 0.0))).unwrap();
        let s = StateVector::basis(["q"], &[0]).unwrap();
        assert!(matches!(measure_generalized(&s, &["q".into()], &[k]), Err(StateError::Basis(_))));
    }
}
