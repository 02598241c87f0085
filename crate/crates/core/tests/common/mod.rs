#![allow(dead_code)]

use catport_core::protocol_math::SchmidtFrame;
use catport_core::protocols::{ChannelSpec, InputFrame, TeleportInput};
use catport_core::qstate::{QubitVector, StateVector, C64};
use catport_core::sampling::{random_amplitudes, random_pair, random_pair_with_overlap, random_schmidt_frame};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn ghz_case(rng: &mut ChaCha8Rng) -> (TeleportInput, ChannelSpec) {
    let (alpha, beta) = random_amplitudes(rng);
    let frame = InputFrame::Schmidt { first: random_schmidt_frame(rng), second: random_schmidt_frame(rng) };
    (TeleportInput::new(alpha, beta, frame).unwrap(), ChannelSpec::ghz())
}

/// Random cat case with `n` Bobs; `overlaps[i]` fixes `r` of pair `i` when given.
pub fn cat_case(rng: &mut ChaCha8Rng, n: usize, overlaps: Option<&[f64]>) -> (TeleportInput, ChannelSpec) {
    let (alpha, beta) = random_amplitudes(rng);
    let (phis, primes): (Vec<QubitVector>, Vec<QubitVector>) = (0..n - 1)
        .map(|i| match overlaps {
            Some(r) => random_pair_with_overlap(rng, r[i]),
            None => random_pair(rng),
        })
        .unzip();
    let frame = InputFrame::Product { phis: phis.clone(), phi_primes: primes.clone(), last: random_schmidt_frame(rng) };
    let input = TeleportInput::new(alpha, beta, frame).unwrap();
    let channel = if n == 2 {
        ChannelSpec::ghz_class(phis[0], primes[0])
    } else {
        ChannelSpec::cat(phis, primes).unwrap()
    };
    (input, channel)
}

pub fn ghz_class_case(rng: &mut ChaCha8Rng, r: Option<f64>) -> (TeleportInput, ChannelSpec) {
    match r {
        Some(r) => cat_case(rng, 2, Some(&[r])),
        None => cat_case(rng, 2, None),
    }
}

/// `|⟨a|b⟩|²` computed directly from amplitudes after aligning label order.
pub fn overlap(a: &StateVector, b: &StateVector) -> f64 {
    let b = b.permuted(a.labels()).unwrap();
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr()
}

pub fn computational() -> SchmidtFrame {
    SchmidtFrame::computational()
}
