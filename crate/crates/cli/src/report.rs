use catport_core::locc::{validate_locality, Branch, Event};
use catport_core::protocols::{ChannelSpec, TeleportInput};
use catport_core::qstate::{StateVector, C64};
use serde::Serialize;

/// Rounds to 12 significant digits and folds `-0` into `0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    let y: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

pub fn pair(z: C64) -> [f64; 2] {
    [sig12(z.re), sig12(z.im)]
}

#[derive(Debug, Serialize)]
pub struct StateReport {
    pub labels: Vec<String>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateReport {
    pub fn new(state: &StateVector) -> Self {
        StateReport {
            labels: state.labels().iter().map(|l| l.as_str().to_owned()).collect(),
            amplitudes: state.amplitudes().iter().map(|&z| pair(z)).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InputReport {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    /// Factors of `|x⟩`, one `[c0, c1]` per qubit.
    pub x: Vec<[[f64; 2]; 2]>,
    /// Factors of `|y⟩`.
    pub y: Vec<[[f64; 2]; 2]>,
}

#[derive(Debug, Serialize)]
pub struct OverlapReport {
    pub r: f64,
    pub epsilon: f64,
    pub theta: f64,
}

#[derive(Debug, Serialize)]
pub struct ChannelReport {
    pub family: String,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub overlaps: Vec<OverlapReport>,
}

#[derive(Debug, Serialize)]
pub struct OutcomeReport {
    pub measurement: String,
    pub party: String,
    pub outcome: String,
    pub probability: f64,
}

#[derive(Debug, Serialize)]
pub struct MessageReport {
    pub from: String,
    pub to: Vec<String>,
    pub measurement: String,
    pub payload: String,
    pub bits: u32,
}

#[derive(Debug, Serialize)]
pub struct BranchReport {
    pub outcomes: Vec<OutcomeReport>,
    pub probability: f64,
    pub success: bool,
    pub reachable: bool,
    pub fidelity: Option<f64>,
    pub bob_state: Option<StateReport>,
    pub messages: Vec<MessageReport>,
    pub locality_violations: Vec<String>,
}

impl BranchReport {
    pub fn new(branch: &Branch) -> Self {
        BranchReport {
            outcomes: branch
                .outcomes
                .iter()
                .map(|o| OutcomeReport {
                    measurement: o.measurement.clone(),
                    party: o.party.clone(),
                    outcome: o.name.clone(),
                    probability: sig12(o.probability),
                })
                .collect(),
            probability: sig12(branch.probability),
            success: branch.success,
            reachable: branch.reachable,
            fidelity: branch.fidelity.map(sig12),
            bob_state: branch.bob_state.as_ref().map(StateReport::new),
            messages: branch
                .transcript
                .events
                .iter()
                .filter_map(|e| match e {
                    Event::Message(m) => Some(MessageReport {
                        from: m.from.clone(),
                        to: m.to.clone(),
                        measurement: m.measurement.clone(),
                        payload: m.payload_name.clone(),
                        bits: m.bit_count,
                    }),
                    _ => None,
                })
                .collect(),
            locality_violations: validate_locality(&branch.transcript)
                .violations
                .iter()
                .map(ToString::to_string)
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub branches: usize,
    pub reachable: usize,
    pub success_probability: f64,
    pub min_fidelity: Option<f64>,
    pub locality_ok: bool,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub script: String,
    pub n: usize,
    pub mode: String,
    pub seed: u64,
    pub input: InputReport,
    pub channel: ChannelReport,
    pub target: StateReport,
    pub branches: Vec<BranchReport>,
    pub summary: Summary,
}

fn factors(v: &[catport_core::qstate::QubitVector]) -> Vec<[[f64; 2]; 2]> {
    v.iter().map(|q| q.amplitudes().map(pair)).collect()
}

impl RunReport {
    pub fn new(
        script: &str,
        mode: &str,
        seed: u64,
        input: &TeleportInput,
        channel: &ChannelSpec,
        branches: &[Branch],
        summary: Summary,
    ) -> Self {
        let (x, y) = input.frame.basis_vectors();
        RunReport {
            script: script.to_owned(),
            n: input.n(),
            mode: mode.to_owned(),
            seed,
            input: InputReport { alpha: pair(input.alpha), beta: pair(input.beta), x: factors(&x), y: factors(&y) },
            channel: ChannelReport {
                family: channel.family.name().to_owned(),
                a: pair(channel.a),
                b: pair(channel.b),
                overlaps: channel
                    .frames()
                    .iter()
                    .map(|f| OverlapReport { r: sig12(f.r), epsilon: sig12(f.epsilon), theta: sig12(f.theta) })
                    .collect(),
            },
            target: StateReport::new(&input.target()),
            branches: branches.iter().map(BranchReport::new).collect(),
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}
