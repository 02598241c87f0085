use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::locc::{Party, Role};
use crate::protocol_math::{overlap_frame, OverlapFrame, SchmidtFrame};
use crate::qstate::{Label, QubitVector, StateVector, C64, NORM_TOL};

use super::{ProtocolError, ProtocolResult, MATCH_TOL, MAX_BOBS};

/// `"1"…"n"`
pub fn input_labels(n: usize) -> Vec<Label> {
    (1..=n).map(|i| Label::new(i.to_string())).collect()
}

/// `"B1"…"Bn"`
pub fn bob_labels(n: usize) -> Vec<Label> {
    (1..=n).map(|j| Label::new(format!("B{j}"))).collect()
}

/// `"A", "B1"…"Bn"`
pub fn channel_labels(n: usize) -> Vec<Label> {
    std::iter::once(Label::new("A")).chain(bob_labels(n)).collect()
}

/// `α·|xs⟩ + β·|ys⟩` for two product states with orthogonal last factors.
fn superpose(labels: &[Label], alpha: C64, xs: &[QubitVector], beta: C64, ys: &[QubitVector]) -> ProtocolResult<StateVector> {
    let x = StateVector::product(labels.to_vec(), xs)?;
    let y = StateVector::product(labels.to_vec(), ys)?;
    let amps = x.amplitudes().iter().zip(y.amplitudes()).map(|(p, q)| alpha * p + beta * q).collect();
    Ok(StateVector::new(labels.to_vec(), amps)?)
}

/// Known product vectors spanning the teleportable plane.
#[derive(Debug, Clone, PartialEq)]
pub enum InputFrame {
    /// `|0'0''⟩` and `|1'1''⟩`: `first` is `{|0'⟩, |1'⟩}` on qubit 1,
    /// `second` is `{|0''⟩, |1''⟩}` on qubit 2.
    Schmidt { first: SchmidtFrame, second: SchmidtFrame },
    /// `|φ₁…φ_{N−1} 0'⟩` and `|φ'₁…φ'_{N−1} 1'⟩` with `last = {|0'⟩, |1'⟩}`.
    Product { phis: Vec<QubitVector>, phi_primes: Vec<QubitVector>, last: SchmidtFrame },
}

impl InputFrame {
    pub fn num_qubits(&self) -> usize {
        match self {
            InputFrame::Schmidt { .. } => 2,
            InputFrame::Product { phis, .. } => phis.len() + 1,
        }
    }

    /// The two product vectors `(|x⟩, |y⟩)`, factor by factor.
    pub fn basis_vectors(&self) -> (Vec<QubitVector>, Vec<QubitVector>) {
        match self {
            InputFrame::Schmidt { first, second } => (vec![first.zero, second.zero], vec![first.one, second.one]),
            InputFrame::Product { phis, phi_primes, last } => {
                let mut x = phis.clone();
                x.push(last.zero);
                let mut y = phi_primes.clone();
                y.push(last.one);
                (x, y)
            }
        }
    }

    fn validate(&self) -> ProtocolResult<()> {
        if let InputFrame::Product { phis, phi_primes, .. } = self {
            if phis.len() != phi_primes.len() {
                return Err(ProtocolError::Config(format!(
                    "{} φ vectors but {} φ' vectors",
                    phis.len(),
                    phi_primes.len()
                )));
            }
            if phis.is_empty() {
                return Err(ProtocolError::Config("product frame needs at least one φ pair".into()));
            }
        }
        Ok(())
    }
}

/// The state `α|x⟩ + β|y⟩` handed to Alice (and the Claires).
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportInput {
    pub alpha: C64,
    pub beta: C64,
    pub frame: InputFrame,
}

impl TeleportInput {
    pub fn new(alpha: C64, beta: C64, frame: InputFrame) -> ProtocolResult<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(ProtocolError::Config(format!("|α|² + |β|² = {norm}")));
        }
        frame.validate()?;
        Ok(TeleportInput { alpha, beta, frame })
    }

    /// Number of input qubits, equal to the number of Bobs.
    pub fn n(&self) -> usize {
        self.frame.num_qubits()
    }

    /// The input state on `labels`.
    pub fn state_on(&self, labels: &[Label]) -> ProtocolResult<StateVector> {
        let (x, y) = self.frame.basis_vectors();
        if labels.len() != x.len() {
            return Err(ProtocolError::Config(format!("{} labels for a {}-qubit input", labels.len(), x.len())));
        }
        superpose(labels, self.alpha, &x, self.beta, &y)
    }

    /// The input state on `"1"…"N"`.
    pub fn state(&self) -> StateVector {
        self.state_on(&input_labels(self.n())).expect("validated input")
    }

    /// The state the Bobs must hold at the end, on `"B1"…"BN"`.
    pub fn target(&self) -> StateVector {
        self.state_on(&bob_labels(self.n())).expect("validated input")
    }

    /// Finds `α, β` with `state = α|x⟩ + β|y⟩`. States off the plane are
    /// rejected: the protocols teleport only the known plane.
    pub fn decompose(state: &StateVector, frame: InputFrame) -> ProtocolResult<Self> {
        frame.validate()?;
        let labels = input_labels(frame.num_qubits());
        let state = state.permuted(&labels).map_err(|e| ProtocolError::Config(format!("input state: {e}")))?;
        let (x, y) = frame.basis_vectors();
        let x = StateVector::product(labels.clone(), &x)?;
        let y = StateVector::product(labels, &y)?;
        let alpha = x.inner(&state)?;
        let beta = y.inner(&state)?;
        let residual = 1.0 - alpha.norm_sqr() - beta.norm_sqr();
        if residual > MATCH_TOL {
            return Err(ProtocolError::Config(format!(
                "input has weight {residual:.3e} outside the teleportable plane"
            )));
        }
        let scale = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        TeleportInput::new(alpha / scale, beta / scale, frame)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    Ghz,
    GhzClass,
    Cat,
}

impl ChannelFamily {
    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Ghz => "ghz",
            ChannelFamily::GhzClass => "ghz-class",
            ChannelFamily::Cat => "cat",
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Channel `a|0 φ₁…φ_{N−1} 0⟩ + b|1 φ'₁…φ'_{N−1} 1⟩` on `A, B1…BN`.
/// The GHZ family is the case `φ = |0⟩, φ' = |1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub family: ChannelFamily,
    pub a: C64,
    pub b: C64,
    pub phis: Vec<QubitVector>,
    pub phi_primes: Vec<QubitVector>,
}

fn balanced() -> C64 {
    C64::new(FRAC_1_SQRT_2, 0.0)
}

impl ChannelSpec {
    /// `(|000⟩ + |111⟩)/√2`
    pub fn ghz() -> Self {
        ChannelSpec {
            family: ChannelFamily::Ghz,
            a: balanced(),
            b: balanced(),
            phis: vec![QubitVector::zero()],
            phi_primes: vec![QubitVector::one()],
        }
    }

    /// `(|0φ0⟩ + |1φ'1⟩)/√2`
    pub fn ghz_class(phi: QubitVector, phi_prime: QubitVector) -> Self {
        ChannelSpec {
            family: ChannelFamily::GhzClass,
            a: balanced(),
            b: balanced(),
            phis: vec![phi],
            phi_primes: vec![phi_prime],
        }
    }

    /// `(|0φ₁…φ_{N−1}0⟩ + |1φ'₁…φ'_{N−1}1⟩)/√2`
    pub fn cat(phis: Vec<QubitVector>, phi_primes: Vec<QubitVector>) -> ProtocolResult<Self> {
        let spec = ChannelSpec { family: ChannelFamily::Cat, a: balanced(), b: balanced(), phis, phi_primes };
        spec.validate()?;
        Ok(spec)
    }

    /// Replaces the weights `a, b`.
    pub fn with_weights(mut self, a: C64, b: C64) -> ProtocolResult<Self> {
        self.a = a;
        self.b = b;
        self.validate()?;
        Ok(self)
    }

    /// The same channel with weights `1/√2`.
    pub fn balanced(&self) -> ChannelSpec {
        ChannelSpec { a: balanced(), b: balanced(), ..self.clone() }
    }

    /// Number of Bobs.
    pub fn n(&self) -> usize {
        self.phis.len() + 1
    }

    /// `a = b = 1/√2`, the case the deterministic scripts handle.
    pub fn is_balanced(&self) -> bool {
        (self.a - balanced()).norm() < NORM_TOL && (self.b - balanced()).norm() < NORM_TOL
    }

    pub fn frames(&self) -> Vec<OverlapFrame> {
        self.phis.iter().zip(&self.phi_primes).map(|(p, q)| overlap_frame(p, q)).collect()
    }

    pub fn validate(&self) -> ProtocolResult<()> {
        let norm = self.a.norm_sqr() + self.b.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(ProtocolError::Config(format!("channel weights have |a|² + |b|² = {norm}")));
        }
        if self.phis.len() != self.phi_primes.len() {
            return Err(ProtocolError::Config(format!(
                "{} φ vectors but {} φ' vectors",
                self.phis.len(),
                self.phi_primes.len()
            )));
        }
        let n = self.n();
        match self.family {
            ChannelFamily::Ghz => {
                let standard = self.phis[0].distance(&QubitVector::zero()) < MATCH_TOL
                    && self.phi_primes[0].distance(&QubitVector::one()) < MATCH_TOL;
                if n != 2 || !standard {
                    return Err(ProtocolError::Config("the GHZ family is the three-qubit channel a|000⟩ + b|111⟩".into()));
                }
            }
            ChannelFamily::GhzClass if n != 2 => {
                return Err(ProtocolError::Config(format!("a GHZ-class channel has two Bobs, not {n}")));
            }
            ChannelFamily::Cat if !(2..=MAX_BOBS).contains(&n) => {
                return Err(ProtocolError::Config(format!("cat channels need 2 to {MAX_BOBS} Bobs, got {n}")));
            }
            _ => {}
        }
        Ok(())
    }

    /// The channel state on `A, B1…BN`.
    pub fn state(&self) -> ProtocolResult<StateVector> {
        self.validate()?;
        let mut x = vec![QubitVector::zero()];
        x.extend(&self.phis);
        x.push(QubitVector::zero());
        let mut y = vec![QubitVector::one()];
        y.extend(&self.phi_primes);
        y.push(QubitVector::one());
        superpose(&channel_labels(self.n()), self.a, &x, self.b, &y)
    }
}

/// Parties of a run: Alice, then the Claires, then the Bobs.
fn parties(family: ChannelFamily, n: usize) -> Vec<Party> {
    let inputs = input_labels(n);
    let mut alice = match family {
        ChannelFamily::Ghz => inputs.clone(),
        _ => vec![inputs[n - 1].clone()],
    };
    alice.push(Label::new("A"));
    let mut out = vec![Party::new(Role::Alice, alice)];
    if family != ChannelFamily::Ghz {
        out.extend((1..n).map(|i| Party::new(Role::Claire(i), vec![inputs[i - 1].clone()])));
    }
    out.extend(bob_labels(n).into_iter().enumerate().map(|(j, l)| Party::new(Role::Bob(j + 1), vec![l])));
    out
}

/// Checks that `input` fits `channel`: matching sizes, the right kind of
/// frame, and (for the GHZ-class and cat families) the same φ vectors.
pub(crate) fn check_compatible(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<()> {
    channel.validate()?;
    if input.n() != channel.n() {
        return Err(ProtocolError::Config(format!(
            "input has {} qubits but the channel has {} Bobs",
            input.n(),
            channel.n()
        )));
    }
    match (&input.frame, channel.family) {
        (InputFrame::Schmidt { .. }, ChannelFamily::Ghz) => Ok(()),
        (InputFrame::Schmidt { .. }, family) => Err(ProtocolError::Config(format!(
            "the {family} protocol teleports states of the form α|φ…0'⟩ + β|φ'…1'⟩"
        ))),
        (InputFrame::Product { .. }, ChannelFamily::Ghz) => Err(ProtocolError::Config(
            "the GHZ protocol teleports states of the form α|0'0''⟩ + β|1'1''⟩".into(),
        )),
        (InputFrame::Product { phis, phi_primes, .. }, _) => {
            let pairs = phis.iter().zip(&channel.phis).chain(phi_primes.iter().zip(&channel.phi_primes));
            for (i, (ours, theirs)) in pairs.enumerate() {
                let d = ours.distance(theirs);
                if d > MATCH_TOL {
                    let which = if i < phis.len() { "φ" } else { "φ'" };
                    return Err(ProtocolError::Config(format!(
                        "input {which}{} differs from the channel's by {d:.3e}",
                        i % phis.len() + 1
                    )));
                }
            }
            Ok(())
        }
    }
}

/// The joint state `input ⊗ channel` on `"1"…"N", "A", "B1"…"BN"` and the
/// parties owning its qubits.
pub fn build_initial_state(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<(StateVector, Vec<Party>)> {
    check_compatible(input, channel)?;
    let state = crate::qstate::tensor(&[input.state(), channel.state()?])?;
    Ok((state, parties(channel.family, channel.n())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn ghz_initial_state_is_kronecker_product() {
        let frame = InputFrame::Schmidt { first: SchmidtFrame::computational(), second: SchmidtFrame::computational() };
        let input = TeleportInput::new(c(0.6), c(0.8), frame).unwrap();
        let (state, parties) = build_initial_state(&input, &ChannelSpec::ghz()).unwrap();
        assert_eq!(state.num_qubits(), 5);
        let h = FRAC_1_SQRT_2;
        // |ξ⟩ = 0.6|00⟩ + 0.8|11⟩, GHZ = h|000⟩ + h|111⟩
        let mut expect = vec![C64::new(0.0, 0.0); 32];
        expect[0b00_000] = c(0.6 * h);
        expect[0b00_111] = c(0.6 * h);
        expect[0b11_000] = c(0.8 * h);
        expect[0b11_111] = c(0.8 * h);
        for (a, b) in state.amplitudes().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(parties.len(), 3);
        assert_eq!(parties[0].qubits.len(), 3);
    }

    #[test]
    fn three_bob_cat_with_trivial_phis() {
        let zeros = vec![QubitVector::zero(); 2];
        let channel = ChannelSpec::cat(zeros.clone(), zeros).unwrap();
        let state = channel.state().unwrap();
        // labels A, B1, B2, B3: (|0000⟩ + |1001⟩)/√2
        let amps = state.amplitudes();
        assert!((amps[0b0000].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((amps[0b1001].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((state.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ownership_partitions_labels() {
        let phis = vec![QubitVector::zero(), QubitVector::plus()];
        let primes = vec![QubitVector::one(), QubitVector::zero()];
        let input = TeleportInput::new(
            c(1.0),
            c(0.0),
            InputFrame::Product { phis: phis.clone(), phi_primes: primes.clone(), last: SchmidtFrame::computational() },
        )
        .unwrap();
        let (state, parties) = build_initial_state(&input, &ChannelSpec::cat(phis, primes).unwrap()).unwrap();
        let mut owned: Vec<&Label> = parties.iter().flat_map(|p| &p.qubits).collect();
        owned.sort();
        let mut all: Vec<&Label> = state.labels().iter().collect();
        all.sort();
        assert_eq!(owned, all);
        assert_eq!(parties.iter().map(|p| p.id.as_str()).collect::<Vec<_>>(), [
            "Alice", "Claire1", "Claire2", "Bob1", "Bob2", "Bob3"
        ]);
    }

    #[test]
    fn mismatched_phi_is_rejected() {
        let input = TeleportInput::new(
            c(1.0),
            c(0.0),
            InputFrame::Product {
                phis: vec![QubitVector::zero()],
                phi_primes: vec![QubitVector::plus()],
                last: SchmidtFrame::computational(),
            },
        )
        .unwrap();
        let channel = ChannelSpec::ghz_class(QubitVector::zero(), QubitVector::one());
        assert!(matches!(build_initial_state(&input, &channel), Err(ProtocolError::Config(_))));
    }

    #[test]
    fn decompose_rejects_states_off_the_plane() {
        let frame = InputFrame::Schmidt { first: SchmidtFrame::computational(), second: SchmidtFrame::computational() };
        let off = StateVector::basis(["1", "2"], &[0, 1]).unwrap();
        assert!(TeleportInput::decompose(&off, frame.clone()).is_err());
        let on = TeleportInput::new(c(0.8), c(0.6), frame.clone()).unwrap().state();
        let back = TeleportInput::decompose(&on, frame).unwrap();
        assert!((back.alpha - c(0.8)).norm() < 1e-15 && (back.beta - c(0.6)).norm() < 1e-15);
    }

    #[test]
    fn cat_size_limits() {
        let one = |k| vec![QubitVector::zero(); k];
        assert!(ChannelSpec::cat(one(0), one(0)).is_err());
        assert!(ChannelSpec::cat(one(7), one(7)).is_ok());
        assert!(ChannelSpec::cat(one(8), one(8)).is_err());
    }
}
