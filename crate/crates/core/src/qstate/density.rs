use nalgebra::DMatrix;

use super::index::Split;
use super::state::{check_distinct, Label, StateVector};
use super::{c, StateError, StateResult, C64, EIGEN_FLOOR, NORM_TOL};

/// Density matrix over labelled qubits, same bit order as [`StateVector`].
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    labels: Vec<Label>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(labels: Vec<Label>, matrix: DMatrix<C64>) -> StateResult<Self> {
        check_distinct(&labels)?;
        let dim = 1usize << labels.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(StateError::Dimension { len: matrix.nrows(), qubits: labels.len() });
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > NORM_TOL {
            return Err(StateError::InvalidDensity(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > NORM_TOL {
            return Err(StateError::InvalidDensity(format!("trace {tr} ≠ 1")));
        }
        let rho = DensityMatrix { labels, matrix };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < EIGEN_FLOOR {
            return Err(StateError::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        DensityMatrix {
            labels: state.labels().to_vec(),
            matrix: DMatrix::from_fn(dim, dim, |r, col| a[r] * a[col].conj()),
        }
    }

    /// `I / 2^n`
    pub fn maximally_mixed(labels: Vec<Label>) -> StateResult<Self> {
        let dim = 1usize << labels.len();
        Self::new(labels, DMatrix::from_diagonal_element(dim, dim, c(1.0 / dim as f64, 0.0)))
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `⟨ψ|ρ|ψ⟩`, with `ψ` reordered to this matrix's labels.
    pub fn expectation(&self, psi: &StateVector) -> StateResult<f64> {
        let psi = psi.permuted(&self.labels)?;
        let a = psi.amplitudes();
        let mut acc = c(0.0, 0.0);
        for r in 0..a.len() {
            for col in 0..a.len() {
                acc += a[r].conj() * self.matrix[(r, col)] * a[col];
            }
        }
        Ok(acc.re)
    }

    /// Partial transpose on the qubits listed in `transposed`.
    pub fn partial_transpose(&self, transposed: &[Label]) -> StateResult<DMatrix<C64>> {
        let positions: Vec<usize> = transposed
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| StateError::UnknownLabel(l.to_string()))
            })
            .collect::<StateResult<_>>()?;
        let split = Split::new(self.labels.len(), &positions);
        let dim = self.dim();
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        for t1 in 0..split.target_dim() {
            for r1 in 0..split.rest_dim() {
                for t2 in 0..split.target_dim() {
                    for r2 in 0..split.rest_dim() {
                        out[(split.index(t1, r1), split.index(t2, r2))] =
                            self.matrix[(split.index(t2, r1), split.index(t1, r2))];
                    }
                }
            }
        }
        Ok(out)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Anything a reduced density matrix can be taken of.
pub trait Reducible {
    fn labels(&self) -> &[Label];
    /// Reduced density matrix on `keep`, in the order given.
    fn reduce(&self, keep: &[Label]) -> StateResult<DensityMatrix>;
}

fn keep_positions(all: &[Label], keep: &[Label]) -> StateResult<Vec<usize>> {
    if keep.is_empty() {
        return Err(StateError::Domain("partial trace must keep at least one qubit".into()));
    }
    check_distinct(keep)?;
    keep.iter()
        .map(|l| all.iter().position(|x| x == l).ok_or_else(|| StateError::UnknownLabel(l.to_string())))
        .collect()
}

impl Reducible for StateVector {
    fn labels(&self) -> &[Label] {
        StateVector::labels(self)
    }

    fn reduce(&self, keep: &[Label]) -> StateResult<DensityMatrix> {
        let positions = keep_positions(self.labels(), keep)?;
        let split = Split::new(self.num_qubits(), &positions);
        let a = self.amplitudes();
        let dim = split.target_dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for r in 0..split.rest_dim() {
            for t1 in 0..dim {
                let x = a[split.index(t1, r)];
                if x.norm_sqr() == 0.0 {
                    continue;
                }
                for t2 in 0..dim {
                    m[(t1, t2)] += x * a[split.index(t2, r)].conj();
                }
            }
        }
        Ok(DensityMatrix { labels: keep.to_vec(), matrix: m })
    }
}

impl Reducible for DensityMatrix {
    fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn reduce(&self, keep: &[Label]) -> StateResult<DensityMatrix> {
        let positions = keep_positions(&self.labels, keep)?;
        let split = Split::new(self.labels.len(), &positions);
        let dim = split.target_dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for r in 0..split.rest_dim() {
            for t1 in 0..dim {
                for t2 in 0..dim {
                    m[(t1, t2)] += self.matrix[(split.index(t1, r), split.index(t2, r))];
                }
            }
        }
        Ok(DensityMatrix { labels: keep.to_vec(), matrix: m })
    }
}

/// Reduced density matrix of `state` on the qubits in `keep`.
pub fn partial_trace<R: Reducible + ?Sized>(state: &R, keep: &[Label]) -> StateResult<DensityMatrix> {
    state.reduce(keep)
}

/// Negativity `(‖ρ^{T_B}‖₁ − 1)/2` of a two-qubit state, with the second
/// label as subsystem B. Zero (within numerical noise) iff `ρ` has a
/// positive partial transpose; for two qubits a nonzero value means the
/// state is distillable.
pub fn negativity(rho: &DensityMatrix) -> StateResult<f64> {
    if rho.labels.len() != 2 {
        return Err(StateError::Domain(format!(
            "negativity needs a two-qubit state, got {} qubits",
            rho.labels.len()
        )));
    }
    let pt = rho.partial_transpose(&rho.labels[1..])?;
    let trace_norm: f64 = hermitian_eigenvalues(&pt).iter().map(|x| x.abs()).sum();
    Ok(((trace_norm - 1.0) / 2.0).max(0.0))
}
