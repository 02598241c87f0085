mod common;

use catport_core::analysis::{channel_negativity_report, closed_form_max, plane_entropy, teleportable_entanglement_range};
use catport_core::protocol_math::overlap_frame;
use catport_core::protocols::ChannelSpec;
use catport_core::qstate::QubitVector;
use catport_core::sampling::random_pair_with_overlap;
use common::*;

fn h(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Entropy of `√p|φ0⟩ + √(1−p)|φ'1⟩` from the eigenvalues of the 2×2
/// reduced state `p|φ⟩⟨φ| + (1−p)|φ'⟩⟨φ'|`, written out by hand.
fn entropy_oracle(p: f64, r: f64) -> f64 {
    // trace 1, determinant p(1−p)(1−r²)
    let det = p * (1.0 - p) * (1.0 - r * r);
    let disc = (0.25 - det).max(0.0).sqrt();
    h(0.5 + disc)
}

#[test]
fn alice_bob2_negativity_is_half_the_overlap() {
    let mut rng = rng(51);
    for k in 0..=10 {
        let r = k as f64 / 10.0;
        let (phi, prime) = random_pair_with_overlap(&mut rng, r);
        let report = channel_negativity_report(&ChannelSpec::ghz_class(phi, prime)).unwrap();
        assert!((report.alice_bob2 - r / 2.0).abs() < 1e-10, "r={r}");
        assert!(report.alice_bob1.abs() < 1e-10);
        assert_eq!(report.alice_bob2_distillable(1e-10), k > 0);
    }
    let ghz = channel_negativity_report(&ChannelSpec::ghz()).unwrap();
    assert!(ghz.alice_bob2.abs() < 1e-10 && ghz.alice_bob1.abs() < 1e-10);
}

#[test]
fn cat_channels_are_not_reported() {
    let z = vec![QubitVector::zero(); 2];
    assert!(channel_negativity_report(&ChannelSpec::cat(z.clone(), z).unwrap()).is_err());
}

#[test]
fn curve_matches_hand_oracle() {
    let mut rng = rng(52);
    for k in 0..=10 {
        let r = k as f64 / 10.0;
        let (phi, prime) = random_pair_with_overlap(&mut rng, r);
        let f = overlap_frame(&phi, &prime);
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            assert!((plane_entropy(&f, p) - entropy_oracle(p, r)).abs() < 1e-9, "r={r} p={p}");
        }
    }
}

#[test]
fn grid_maximum_matches_closed_form() {
    let mut rng = rng(53);
    let mut last = f64::INFINITY;
    for k in 0..=10 {
        let r = k as f64 / 10.0;
        let (phi, prime) = random_pair_with_overlap(&mut rng, r);
        let range = teleportable_entanglement_range(&overlap_frame(&phi, &prime), 101).unwrap();
        assert!((range.e_max - h((1.0 + r) / 2.0)).abs() < 1e-6);
        assert!((range.closed_form - closed_form_max(r)).abs() < 1e-15);
        assert!(range.e_max <= 1.0 + 1e-9);
        assert!(range.e_max < last);
        last = range.e_max;
        if r < 1.0 {
            assert!((range.argmax_alpha2 - 0.5).abs() < 1e-12);
        }
        assert_eq!((range.e_max - 1.0).abs() < 1e-9, k == 0);
    }
    assert!(last.abs() < 1e-9);
}
