use std::fmt;

use nalgebra::{DMatrix, Matrix2};

use super::index::Split;
use super::state::{Label, QubitVector, StateVector};
use super::{c, StateError, StateResult, C64, NORM_TOL};

/// A named 2×2 unitary.
#[derive(Debug, Clone)]
pub struct SingleQubitGate {
    name: String,
    matrix: Matrix2<C64>,
}

impl SingleQubitGate {
    pub fn new(name: impl Into<String>, matrix: Matrix2<C64>) -> StateResult<Self> {
        let dev = unitarity_defect(&matrix);
        if dev > NORM_TOL {
            return Err(StateError::NotUnitary(dev));
        }
        Ok(SingleQubitGate { name: name.into(), matrix })
    }

    pub(crate) fn new_unchecked(name: impl Into<String>, matrix: Matrix2<C64>) -> Self {
        SingleQubitGate { name: name.into(), matrix }
    }

    /// The unitary sending `|0⟩ → zero` and `|1⟩ → one` (columns).
    pub fn from_columns(
        name: impl Into<String>,
        zero: QubitVector,
        one: QubitVector,
    ) -> StateResult<Self> {
        let [z0, z1] = zero.amplitudes();
        let [o0, o1] = one.amplitudes();
        Self::new(name, Matrix2::new(z0, o0, z1, o1))
    }

    pub fn identity() -> Self {
        Self::new_unchecked("I", Matrix2::identity())
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        Self::new_unchecked("X", Matrix2::new(o, l, l, o))
    }

    pub fn pauli_y() -> Self {
        let (o, i) = (c(0.0, 0.0), c(0.0, 1.0));
        Self::new_unchecked("Y", Matrix2::new(o, -i, i, o))
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        Self::new_unchecked("Z", Matrix2::new(l, o, o, -l))
    }

    /// `diag(1, e^{iφ})`
    pub fn phase(name: impl Into<String>, phi: f64) -> Self {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        Self::new_unchecked(name, Matrix2::new(l, o, o, C64::from_polar(1.0, phi)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.matrix
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &SingleQubitGate) -> SingleQubitGate {
        SingleQubitGate {
            name: format!("{}·{}", self.name, other.name),
            matrix: self.matrix * other.matrix,
        }
    }

    pub fn adjoint(&self) -> SingleQubitGate {
        SingleQubitGate {
            name: format!("{}†", self.name),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scaled(&self, phase: C64) -> SingleQubitGate {
        SingleQubitGate { name: self.name.clone(), matrix: self.matrix * phase }
    }

    pub fn apply_to(&self, q: &QubitVector) -> QubitVector {
        let [a0, a1] = q.amplitudes();
        let m = &self.matrix;
        QubitVector::new_unchecked(m[(0, 0)] * a0 + m[(0, 1)] * a1, m[(1, 0)] * a0 + m[(1, 1)] * a1)
    }

    /// Largest entrywise distance to `other`.
    pub fn distance(&self, other: &SingleQubitGate) -> f64 {
        (self.matrix - other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise distance after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &SingleQubitGate) -> f64 {
        let tr: C64 = (other.matrix.adjoint() * self.matrix).trace();
        let phase = if tr.norm() > 1e-300 { tr / tr.norm() } else { c(1.0, 0.0) };
        (self.matrix - other.matrix * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_operator(&self) -> Operator {
        Operator {
            name: self.name.clone(),
            num_qubits: 1,
            matrix: DMatrix::from_iterator(2, 2, self.matrix.iter().cloned()),
        }
    }

    /// Applies the gate to qubit `target`.
    pub fn apply(&self, state: &StateVector, target: &Label) -> StateResult<StateVector> {
        let p = state.position(target)?;
        let split = Split::new(state.num_qubits(), &[p]);
        let mut out = state.amplitudes().to_vec();
        let m = &self.matrix;
        for r in 0..split.rest_dim() {
            let (i0, i1) = (split.index(0, r), split.index(1, r));
            let (a0, a1) = (out[i0], out[i1]);
            out[i0] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            out[i1] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
        Ok(StateVector::from_parts(state.labels().to_vec(), out))
    }
}

impl fmt::Display for SingleQubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn unitarity_defect(m: &Matrix2<C64>) -> f64 {
    let d = m.adjoint() * m - Matrix2::identity();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A named linear operator on `num_qubits` qubits, not necessarily unitary.
/// Row/column index bits follow the order of the target labels it is
/// applied to.
#[derive(Debug, Clone)]
pub struct Operator {
    name: String,
    num_qubits: usize,
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(name: impl Into<String>, matrix: DMatrix<C64>) -> StateResult<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || !dim.is_power_of_two() || dim < 2 {
            return Err(StateError::Domain(format!(
                "operator of shape {}×{} does not act on whole qubits",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Operator {
            name: name.into(),
            num_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        let n = self.matrix.nrows();
        let d = self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(n, n);
        d.iter().all(|z| z.norm() <= NORM_TOL)
    }

    /// Applies the operator to `targets` without renormalizing. The result
    /// is returned as raw amplitudes because it may not be a unit vector.
    pub fn apply_raw(&self, state: &StateVector, targets: &[Label]) -> StateResult<Vec<C64>> {
        if targets.len() != self.num_qubits {
            return Err(StateError::Domain(format!(
                "{}-qubit operator applied to {} targets",
                self.num_qubits,
                targets.len()
            )));
        }
        let positions = state.positions(targets)?;
        let split = Split::new(state.num_qubits(), &positions);
        let amps = state.amplitudes();
        let mut out = vec![c(0.0, 0.0); amps.len()];
        let dim = split.target_dim();
        let mut column = vec![c(0.0, 0.0); dim];
        for r in 0..split.rest_dim() {
            for (t, slot) in column.iter_mut().enumerate() {
                *slot = amps[split.index(t, r)];
            }
            for row in 0..dim {
                let mut acc = c(0.0, 0.0);
                for (col, v) in column.iter().enumerate() {
                    acc += self.matrix[(row, col)] * v;
                }
                out[split.index(row, r)] = acc;
            }
        }
        Ok(out)
    }

    /// Applies a unitary operator to `targets`.
    pub fn apply(&self, state: &StateVector, targets: &[Label]) -> StateResult<StateVector> {
        if !self.is_unitary() {
            return Err(StateError::NotUnitary(f64::NAN));
        }
        let out = self.apply_raw(state, targets)?;
        Ok(StateVector::from_parts(state.labels().to_vec(), out))
    }
}
