use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::qstate::{QubitVector, SingleQubitGate, StateError, C64, NORM_TOL};

use super::MathResult;

/// Below this magnitude the overlap phase is undefined and set to zero.
const PHASE_UNDEFINED: f64 = 1e-14;
/// Below this overlap `⟨ā|φ⟩` the frame is treated as degenerate (`φ ∝ φ'`).
const DEGENERATE_OVERLAP: f64 = 1e-13;

/// Geometry of a non-orthogonal pair `(φ, φ')`.
///
/// With `⟨φ|φ'⟩ = r·e^{iε}` and `φ'' = e^{−iε}φ'`, the pair decomposes as
///
/// ```text
/// φ  = cos(θ/2)|a⟩ + sin(θ/2)|ā⟩
/// φ'' = cos(θ/2)|a⟩ − sin(θ/2)|ā⟩
/// ```
///
/// with `r = cos θ`, `θ ∈ [0, π/2]`. For `r = 1` the vector `ā` is not
/// determined; it is taken as the orthogonal complement of `a` whose first
/// nonzero component is real and positive. For `r = 0` the phase `ε` is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapFrame {
    pub r: f64,
    pub epsilon: f64,
    pub theta: f64,
    pub a: QubitVector,
    pub a_bar: QubitVector,
    pub phi: QubitVector,
    pub phi_prime: QubitVector,
    pub phi_second: QubitVector,
}

impl OverlapFrame {
    /// `(cos(θ/2), sin(θ/2))`
    pub fn half_angle(&self) -> (f64, f64) {
        ((self.theta / 2.0).cos(), (self.theta / 2.0).sin())
    }

    /// Largest deviation from the frame invariants.
    pub fn defect(&self) -> f64 {
        let (ch, sh) = self.half_angle();
        let ip = self.phi.inner(&self.phi_prime);
        let rebuilt_phi = QubitVector::new_unchecked(
            self.a.amplitudes()[0] * ch + self.a_bar.amplitudes()[0] * sh,
            self.a.amplitudes()[1] * ch + self.a_bar.amplitudes()[1] * sh,
        );
        let rebuilt_second = QubitVector::new_unchecked(
            self.a.amplitudes()[0] * ch - self.a_bar.amplitudes()[0] * sh,
            self.a.amplitudes()[1] * ch - self.a_bar.amplitudes()[1] * sh,
        );
        let phase = C64::from_polar(1.0, self.epsilon);
        [
            (ip - phase * self.r).norm(),
            (self.r - self.theta.cos()).abs(),
            rebuilt_phi.distance(&self.phi),
            rebuilt_second.distance(&self.phi_second),
            self.phi_prime.distance(&self.phi_second.scaled(phase)),
            self.a.inner(&self.a_bar).norm(),
            (self.a.inner(&self.a).re - 1.0).abs(),
            (self.a_bar.inner(&self.a_bar).re - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Orthogonal complement of `v` with its first nonzero component real
/// and positive.
fn canonical_complement(v: &QubitVector) -> QubitVector {
    let [v0, v1] = v.amplitudes();
    let w = QubitVector::new_unchecked(-v1.conj(), v0.conj());
    let [w0, w1] = w.amplitudes();
    let lead = if w0.norm() > 1e-15 { w0 } else { w1 };
    w.scaled(lead.conj() / lead.norm())
}

/// Derives the overlap frame of `(φ, φ')`.
pub fn overlap_frame(phi: &QubitVector, phi_prime: &QubitVector) -> OverlapFrame {
    let ip = phi.inner(phi_prime);
    let r = ip.norm().min(1.0);
    let epsilon = if r < PHASE_UNDEFINED {
        0.0
    } else {
        let e = ip.arg();
        if e <= -PI {
            e + 2.0 * PI
        } else {
            e
        }
    };
    let phi_second = phi_prime.scaled(C64::from_polar(1.0, -epsilon));

    let [p0, p1] = phi.amplitudes();
    let [q0, q1] = phi_second.amplitudes();
    let (s0, s1) = (p0 + q0, p1 + q1);
    let (d0, d1) = (p0 - q0, p1 - q1);
    let sum_norm = (s0.norm_sqr() + s1.norm_sqr()).sqrt();
    let diff_norm = (d0.norm_sqr() + d1.norm_sqr()).sqrt();
    // |φ + φ''| = 2cos(θ/2) ≥ √2 since r ≥ 0
    let a = QubitVector::new_unchecked(s0 / sum_norm, s1 / sum_norm);
    let theta = 2.0 * diff_norm.atan2(sum_norm);

    let complement = canonical_complement(&a);
    let overlap = complement.inner(phi);
    let a_bar = if overlap.norm() < DEGENERATE_OVERLAP {
        complement
    } else {
        complement.scaled(overlap / overlap.norm())
    };

    OverlapFrame {
        r,
        epsilon,
        theta,
        a,
        a_bar,
        phi: *phi,
        phi_prime: *phi_prime,
        phi_second,
    }
}

/// An orthonormal pair `{|0'⟩, |1'⟩}` fixing a known local basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtFrame {
    pub zero: QubitVector,
    pub one: QubitVector,
}

impl SchmidtFrame {
    pub fn new(zero: QubitVector, one: QubitVector) -> MathResult<Self> {
        let ip = zero.inner(&one).norm();
        if ip > NORM_TOL {
            return Err(StateError::Basis(format!("Schmidt frame vectors overlap by {ip:e}")).into());
        }
        Ok(SchmidtFrame { zero, one })
    }

    pub fn computational() -> Self {
        SchmidtFrame { zero: QubitVector::zero(), one: QubitVector::one() }
    }

    /// The unitary `|0⟩ → |0'⟩, |1⟩ → |1'⟩`.
    pub fn rotation(&self, name: &str) -> SingleQubitGate {
        SingleQubitGate::from_columns(name, self.zero, self.one).expect("orthonormal columns")
    }
}

/// `U'` on Alice's input qubit (`|0'⟩ → |0⟩`, `|1'⟩ → e^{−iΣε}|1⟩`) and
/// the phase gate `diag(1, e^{−iΣε})` on her channel qubit. The phases of
/// all overlap frames add up.
pub fn gauge_unitaries(
    frames: &[OverlapFrame],
    schmidt: &SchmidtFrame,
) -> (SingleQubitGate, SingleQubitGate) {
    let eps: f64 = frames.iter().map(|f| f.epsilon).sum();
    let phase = C64::from_polar(1.0, -eps);
    let [z0, z1] = schmidt.zero.amplitudes();
    let [o0, o1] = schmidt.one.amplitudes();
    // rows: ⟨0'| and e^{−iε}⟨1'|
    let m = Matrix2::new(z0.conj(), z1.conj(), phase * o0.conj(), phase * o1.conj());
    let u_prime = SingleQubitGate::new("U'", m).expect("U' is unitary");
    let alice_phase = SingleQubitGate::phase("Pε", -eps);
    (u_prime, alice_phase)
}

/// `(U')⁻¹`, applied by the last Bob to restore the input frame.
pub fn inverse_gauge(u_prime: &SingleQubitGate) -> SingleQubitGate {
    u_prime.adjoint().renamed("U'⁻¹")
}

/// `U'' = |a⟩⟨a| − |ā⟩⟨ā|`, swapping `φ ↔ φ''`.
pub fn swap_unitary(frame: &OverlapFrame) -> SingleQubitGate {
    let [a0, a1] = frame.a.amplitudes();
    let [b0, b1] = frame.a_bar.amplitudes();
    let m = Matrix2::new(
        a0 * a0.conj() - b0 * b0.conj(),
        a0 * a1.conj() - b0 * b1.conj(),
        a1 * a0.conj() - b1 * b0.conj(),
        a1 * a1.conj() - b1 * b1.conj(),
    );
    SingleQubitGate::new("U''", m).expect("reflection is unitary")
}

/// `U₁ ⊗ U₂` taking `|ξ⟩ = α|00⟩+β|11⟩` back to `α|0'0''⟩+β|1'1''⟩`.
pub fn restore_unitaries(
    first: &SchmidtFrame,
    second: &SchmidtFrame,
) -> (SingleQubitGate, SingleQubitGate) {
    (first.rotation("U1"), second.rotation("U2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identical_vectors() {
        let f = overlap_frame(&QubitVector::zero(), &QubitVector::zero());
        assert!((f.r - 1.0).abs() < 1e-15 && f.epsilon == 0.0 && f.theta.abs() < 1e-15);
        assert!(f.a.distance(&QubitVector::zero()) < 1e-15);
        assert!(f.a_bar.distance(&QubitVector::one()) < 1e-15);
        assert!(f.defect() < 1e-12);
    }

    #[test]
    fn orthogonal_vectors() {
        let f = overlap_frame(&QubitVector::zero(), &QubitVector::one());
        assert_eq!(f.r, 0.0);
        assert_eq!(f.epsilon, 0.0);
        assert!((f.theta - FRAC_PI_2).abs() < 1e-15);
        assert!(f.a.distance(&QubitVector::plus()) < 1e-15);
        assert!(f.a_bar.distance(&QubitVector::minus()) < 1e-15);
    }

    #[test]
    fn forty_five_degrees() {
        let f = overlap_frame(&QubitVector::zero(), &QubitVector::plus());
        assert!((f.r - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(f.epsilon, 0.0);
        assert!((f.theta - FRAC_PI_4).abs() < 1e-15);
        assert!(f.defect() < 1e-12);
    }

    #[test]
    fn u_prime_for_pi_over_three() {
        let eps = PI / 3.0;
        let phi = QubitVector::zero();
        let phi_prime = QubitVector::new(c(0.5 * eps.cos(), 0.5 * eps.sin()), c(0.75f64.sqrt(), 0.0)).unwrap();
        let f = overlap_frame(&phi, &phi_prime);
        assert!((f.epsilon - eps).abs() < 1e-14);
        let schmidt = SchmidtFrame::new(
            QubitVector::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
            QubitVector::new(c(0.0, 0.8), c(0.6, 0.0)).unwrap(),
        )
        .unwrap();
        let (u, p) = gauge_unitaries(&[f], &schmidt);
        // U'|0'⟩ = |0⟩, U'|1'⟩ = e^{−iπ/3}|1⟩
        assert!(u.apply_to(&schmidt.zero).distance(&QubitVector::zero()) < 1e-14);
        let expect = QubitVector::one().scaled(C64::from_polar(1.0, -eps));
        assert!(u.apply_to(&schmidt.one).distance(&expect) < 1e-14);
        assert!((p.matrix()[(1, 1)] - C64::from_polar(1.0, -eps)).norm() < 1e-15);
    }

    #[test]
    fn alice_phase_for_quarter_turn() {
        let phi_prime = QubitVector::new(c(0.0, 0.6), c(0.8, 0.0)).unwrap();
        let f = overlap_frame(&QubitVector::zero(), &phi_prime);
        assert!((f.epsilon - FRAC_PI_2).abs() < 1e-15);
        let (_, p) = gauge_unitaries(&[f], &SchmidtFrame::computational());
        assert!((p.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p.matrix()[(1, 1)] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn swap_is_x_for_orthogonal_pair() {
        let f = overlap_frame(&QubitVector::zero(), &QubitVector::one());
        assert!(swap_unitary(&f).distance(&SingleQubitGate::pauli_x()) < 1e-15);
    }

    #[test]
    fn swap_fixes_phi_when_degenerate() {
        let phi = QubitVector::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let f = overlap_frame(&phi, &phi);
        assert!(swap_unitary(&f).apply_to(&phi).distance(&phi) < 1e-15);
    }

    #[test]
    fn computational_frames_restore_to_identity() {
        let c = SchmidtFrame::computational();
        let (u1, u2) = restore_unitaries(&c, &c);
        assert!(u1.distance(&SingleQubitGate::identity()) < 1e-16);
        assert!(u2.distance(&SingleQubitGate::identity()) < 1e-16);
    }

    #[test]
    fn inverse_gauge_inverts() {
        let phi_prime = QubitVector::new(c(0.3, 0.4), c(0.0, 0.75f64.sqrt())).unwrap();
        let f = overlap_frame(&QubitVector::plus(), &phi_prime);
        let schmidt = SchmidtFrame::new(QubitVector::plus(), QubitVector::minus()).unwrap();
        let (u, _) = gauge_unitaries(&[f], &schmidt);
        let prod = inverse_gauge(&u).compose(&u);
        assert!(prod.distance(&SingleQubitGate::identity()) < 1e-14);
    }

    #[test]
    fn non_orthogonal_schmidt_frame_rejected() {
        assert!(SchmidtFrame::new(QubitVector::zero(), QubitVector::plus()).is_err());
    }
}
