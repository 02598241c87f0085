//! Random draws of protocol parameters from a caller-supplied RNG.
//!
//! Single qubits are Haar distributed: `cos θ` uniform on `[−1, 1]` and
//! the relative and global phases uniform on `[0, 2π)`.

use std::f64::consts::TAU;

use rand::Rng;

use crate::protocol_math::SchmidtFrame;
use crate::qstate::{QubitVector, C64};

/// A Haar-random qubit.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitVector {
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let half = cos_t.acos() / 2.0;
    let rel: f64 = rng.random_range(0.0..TAU);
    let global = C64::from_polar(1.0, rng.random_range(0.0..TAU));
    QubitVector::normalized(global * half.cos(), global * C64::from_polar(half.sin(), rel))
        .expect("unit vector")
}

/// Coefficients `(α, β)` with `|α|²` uniform on `[0, 1]` and random phases.
pub fn random_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    let p: f64 = rng.random_range(0.0..=1.0);
    amplitudes_with_weight(rng, p)
}

/// Coefficients `(α, β)` with `|α|² = p` and random phases.
pub fn amplitudes_with_weight<R: Rng + ?Sized>(rng: &mut R, p: f64) -> (C64, C64) {
    let alpha = C64::from_polar(p.sqrt(), rng.random_range(0.0..TAU));
    let beta = C64::from_polar((1.0 - p).max(0.0).sqrt(), rng.random_range(0.0..TAU));
    (alpha, beta)
}

/// A random orthonormal pair `{|0'⟩, |1'⟩}`.
pub fn random_schmidt_frame<R: Rng + ?Sized>(rng: &mut R) -> SchmidtFrame {
    let zero = random_qubit(rng);
    let [z0, z1] = zero.amplitudes();
    let phase = C64::from_polar(1.0, rng.random_range(0.0..TAU));
    let one = QubitVector::normalized(-z1.conj() * phase, z0.conj() * phase).expect("unit vector");
    SchmidtFrame::new(zero, one).expect("orthonormal by construction")
}

/// A random pair `(φ, φ')` with `|⟨φ|φ'⟩| = r` and a random overlap phase.
pub fn random_pair_with_overlap<R: Rng + ?Sized>(rng: &mut R, r: f64) -> (QubitVector, QubitVector) {
    let r = r.clamp(0.0, 1.0);
    let frame = random_schmidt_frame(rng);
    let (phi, perp) = (frame.zero, frame.one);
    let eps = C64::from_polar(1.0, rng.random_range(0.0..TAU));
    let side = C64::from_polar((1.0 - r * r).sqrt(), rng.random_range(0.0..TAU));
    let [p0, p1] = phi.amplitudes();
    let [q0, q1] = perp.amplitudes();
    let phi_prime = QubitVector::normalized(eps * (p0 * r + q0 * side), eps * (p1 * r + q1 * side))
        .expect("unit vector");
    (phi, phi_prime)
}

/// A random pair with `r` drawn uniformly from `[0, 1]`.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> (QubitVector, QubitVector) {
    let r = rng.random_range(0.0..=1.0);
    random_pair_with_overlap(rng, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pair_has_requested_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..=10 {
            let r = k as f64 / 10.0;
            let (p, q) = random_pair_with_overlap(&mut rng, r);
            assert!((p.inner(&q).norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_frames_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let f = random_schmidt_frame(&mut rng);
            assert!(f.zero.inner(&f.one).norm() < 1e-14);
        }
    }

    #[test]
    fn amplitudes_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let (a, b) = random_amplitudes(&mut rng);
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }
}
