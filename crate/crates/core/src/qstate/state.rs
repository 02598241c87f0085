use std::fmt;

use super::index::Split;
use super::{c, StateError, StateResult, C64, NORM_TOL};

/// Opaque name of one qubit in a register.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        Label(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn labels<I, L>(names: I) -> Vec<Label>
where
    I: IntoIterator<Item = L>,
    L: Into<Label>,
{
    names.into_iter().map(Into::into).collect()
}

/// A normalized single-qubit ket `c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitVector([C64; 2]);

impl QubitVector {
    pub fn new(c0: C64, c1: C64) -> StateResult<Self> {
        let n = c0.norm_sqr() + c1.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(n));
        }
        Ok(QubitVector([c0, c1]))
    }

    /// Normalizes `(c0, c1)`; fails only for the zero vector.
    pub fn normalized(c0: C64, c1: C64) -> StateResult<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if n < 1e-300 {
            return Err(StateError::NotNormalized(0.0));
        }
        Ok(QubitVector([c0 / n, c1 / n]))
    }

    pub(crate) fn new_unchecked(c0: C64, c1: C64) -> Self {
        QubitVector([c0, c1])
    }

    pub fn zero() -> Self {
        QubitVector([c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn one() -> Self {
        QubitVector([c(0.0, 0.0), c(1.0, 0.0)])
    }

    /// `(|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        QubitVector([c(h, 0.0), c(h, 0.0)])
    }

    /// `(|0⟩ − |1⟩)/√2`
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        QubitVector([c(h, 0.0), c(-h, 0.0)])
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.0
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &QubitVector) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn scaled(&self, phase: C64) -> Self {
        QubitVector([self.0[0] * phase, self.0[1] * phase])
    }

    /// Euclidean distance to `other`, phase-sensitive.
    pub fn distance(&self, other: &QubitVector) -> f64 {
        ((self.0[0] - other.0[0]).norm_sqr() + (self.0[1] - other.0[1]).norm_sqr()).sqrt()
    }

    pub fn to_state(&self, label: impl Into<Label>) -> StateVector {
        StateVector {
            labels: vec![label.into()],
            amplitudes: self.0.to_vec(),
        }
    }
}

/// Normalized amplitude vector over labelled qubits.
///
/// `amplitudes.len() == 2^labels.len()`; the first label is the most
/// significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<Label>,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new<L: Into<Label>>(
        labels: impl IntoIterator<Item = L>,
        amplitudes: Vec<C64>,
    ) -> StateResult<Self> {
        let labels = self::labels(labels);
        check_distinct(&labels)?;
        if amplitudes.len() != 1usize << labels.len() {
            return Err(StateError::Dimension { len: amplitudes.len(), qubits: labels.len() });
        }
        let n = norm_sqr(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(n));
        }
        Ok(StateVector { labels, amplitudes })
    }

    /// Builds a state from an unnormalized amplitude vector.
    pub fn normalized<L: Into<Label>>(
        labels: impl IntoIterator<Item = L>,
        mut amplitudes: Vec<C64>,
    ) -> StateResult<Self> {
        let n = norm_sqr(&amplitudes).sqrt();
        if n < 1e-300 {
            return Err(StateError::NotNormalized(0.0));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Self::new(labels, amplitudes)
    }

    /// Computational basis state; `bits[i]` is the value of `labels[i]`.
    pub fn basis<L: Into<Label>>(
        labels: impl IntoIterator<Item = L>,
        bits: &[u8],
    ) -> StateResult<Self> {
        let labels = self::labels(labels);
        if bits.len() != labels.len() {
            return Err(StateError::Domain(format!(
                "{} bits given for {} qubits",
                bits.len(),
                labels.len()
            )));
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
        let mut amplitudes = vec![c(0.0, 0.0); 1 << labels.len()];
        amplitudes[index] = c(1.0, 0.0);
        Self::new(labels, amplitudes)
    }

    /// Product of single-qubit kets, one per label.
    pub fn product<L: Into<Label>>(
        labels: impl IntoIterator<Item = L>,
        factors: &[QubitVector],
    ) -> StateResult<Self> {
        let labels = self::labels(labels);
        if factors.len() != labels.len() {
            return Err(StateError::Domain(format!(
                "{} factors given for {} qubits",
                factors.len(),
                labels.len()
            )));
        }
        let parts: Vec<StateVector> = labels
            .into_iter()
            .zip(factors)
            .map(|(l, q)| q.to_state(l))
            .collect();
        tensor(&parts)
    }

    /// Unchecked constructor for internal use after norm-preserving maps.
    pub(crate) fn from_parts(labels: Vec<Label>, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << labels.len());
        StateVector { labels, amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn position(&self, label: &Label) -> StateResult<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| StateError::UnknownLabel(label.to_string()))
    }

    pub fn positions(&self, labels: &[Label]) -> StateResult<Vec<usize>> {
        check_distinct(labels)?;
        labels.iter().map(|l| self.position(l)).collect()
    }

    /// `⟨self|other⟩` over identical label order.
    pub fn inner(&self, other: &StateVector) -> StateResult<C64> {
        if self.labels != other.labels {
            return Err(StateError::Domain("inner product of differently labelled states".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, phase: C64) -> StateVector {
        StateVector {
            labels: self.labels.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// Same state with the qubits listed in `order`.
    pub fn permuted(&self, order: &[Label]) -> StateResult<StateVector> {
        if order.len() != self.labels.len() {
            return Err(StateError::Domain(format!(
                "reordering {} qubits into {} labels",
                self.labels.len(),
                order.len()
            )));
        }
        let positions = self.positions(order)?;
        let split = Split::new(self.num_qubits(), &positions);
        let amplitudes = (0..split.target_dim()).map(|t| self.amplitudes[split.index(t, 0)]).collect();
        Ok(StateVector { labels: order.to_vec(), amplitudes })
    }

    /// Extracts the pure factor on `keep`, assuming the state is a product
    /// across `keep : rest`. Fails if the Schmidt rank across that cut
    /// exceeds one by more than `tol` in the discarded weight.
    pub fn factor(&self, keep: &[Label], tol: f64) -> StateResult<StateVector> {
        let positions = self.positions(keep)?;
        let split = Split::new(self.num_qubits(), &positions);
        // pick the rest configuration with the largest weight
        let weight = |r: usize| -> f64 {
            (0..split.target_dim()).map(|t| self.amplitudes[split.index(t, r)].norm_sqr()).sum()
        };
        let best = (0..split.rest_dim())
            .max_by(|&x, &y| weight(x).total_cmp(&weight(y)))
            .unwrap_or(0);
        let slice: Vec<C64> = (0..split.target_dim()).map(|t| self.amplitudes[split.index(t, best)]).collect();
        let n = norm_sqr(&slice).sqrt();
        let factor: Vec<C64> = slice.iter().map(|a| a / n).collect();

        // weight of the state outside span{factor ⊗ anything}
        let captured: f64 = (0..split.rest_dim())
            .map(|r| {
                let overlap: C64 = (0..split.target_dim())
                    .map(|t| factor[t].conj() * self.amplitudes[split.index(t, r)])
                    .sum();
                overlap.norm_sqr()
            })
            .sum();
        let residual = self.norm_sqr() - captured;
        if residual > tol {
            return Err(StateError::Domain(format!(
                "state is entangled across the requested cut (residual weight {residual:e})"
            )));
        }
        Ok(StateVector { labels: keep.to_vec(), amplitudes: factor })
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_qubits();
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{:0width$b}⟩", a.re, a.im, i, width = n)?;
        }
        if first {
            write!(f, "0")?;
        }
        let names: Vec<&str> = self.labels.iter().map(Label::as_str).collect();
        write!(f, " [{}]", names.join(","))
    }
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

pub(crate) fn check_distinct(labels: &[Label]) -> StateResult<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(StateError::DuplicateLabel(l.to_string()));
        }
    }
    Ok(())
}

/// Kronecker product of the factors; labels are concatenated in order.
pub fn tensor(factors: &[StateVector]) -> StateResult<StateVector> {
    let labels: Vec<Label> = factors.iter().flat_map(|f| f.labels.iter().cloned()).collect();
    check_distinct(&labels)?;
    let mut amplitudes = vec![c(1.0, 0.0)];
    for f in factors {
        amplitudes = amplitudes
            .iter()
            .flat_map(|a| f.amplitudes.iter().map(move |b| a * b))
            .collect();
    }
    Ok(StateVector { labels, amplitudes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn tensor_of_basis_kets() {
        let s = tensor(&[QubitVector::zero().to_state("x"), QubitVector::zero().to_state("y")]).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn tensor_plus_with_one() {
        let s = tensor(&[QubitVector::plus().to_state("x"), QubitVector::one().to_state("y")]).unwrap();
        let expect = [0.0, FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        let err = tensor(&[QubitVector::zero().to_state("x"), QubitVector::one().to_state("x")]).unwrap_err();
        assert_eq!(err, StateError::DuplicateLabel("x".into()));
    }

    #[test]
    fn constructor_checks_length_and_norm() {
        assert!(matches!(
            StateVector::new(["x"], vec![c(1.0, 0.0)]),
            Err(StateError::Dimension { .. })
        ));
        assert!(matches!(
            StateVector::new(["x"], vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(StateError::NotNormalized(_))
        ));
    }

    #[test]
    fn permutation_moves_bits() {
        let s = StateVector::basis(["x", "y", "z"], &[1, 0, 0]).unwrap();
        let p = s.permuted(&labels(["z", "x", "y"])).unwrap();
        assert_eq!(p, StateVector::basis(["z", "x", "y"], &[0, 1, 0]).unwrap());
    }

    #[test]
    fn factor_extracts_product_part() {
        let bell = StateVector::normalized(["x", "y"], vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let s = tensor(&[bell.clone(), QubitVector::plus().to_state("z")]).unwrap();
        let f = s.factor(&labels(["x", "y"]), 1e-12).unwrap();
        assert!((f.inner(&bell).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(s.factor(&labels(["x"]), 1e-12).is_err());
    }
}
