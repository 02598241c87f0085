use std::collections::BTreeMap;

use crate::locc::{compare_orderings, enumerate, Branch, CorrectionTable, MeasurementKind, OrderReport, Phase, Protocol, Step};
use crate::protocol_math::{
    bell_basis, cat_correction, filter_measurement, frame_basis, gauge_unitaries, ghz_basis, ghz_class_correction,
    ghz_correction, inverse_gauge, restore_unitaries, BellOutcome, ClaireOutcome, CorrectionAction, GhzOutcome,
    OverlapFrame,
};
use crate::qstate::Label;

use super::input::{bob_labels, build_initial_state, check_compatible, input_labels, ChannelFamily, ChannelSpec, InputFrame, TeleportInput};
use super::{ProtocolError, ProtocolResult};

/// Id of Alice's Bell measurement.
pub const ALICE_BELL: &str = "bell";
/// Id of Alice's GHZ-basis measurement.
pub const ALICE_GHZ: &str = "ghz";
/// Id of Alice's filtering measurement.
pub const FILTER: &str = "filter";

fn claire_measurement(i: usize) -> String {
    format!("claire{i}")
}

fn bob(j: usize) -> String {
    format!("Bob{j}")
}

/// Which side measures first in the GHZ-class and cat scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasurementOrder {
    #[default]
    AliceFirst,
    ClairesFirst,
}

fn require_balanced(channel: &ChannelSpec) -> ProtocolResult<()> {
    if channel.is_balanced() {
        Ok(())
    } else {
        Err(ProtocolError::Config(format!(
            "weights a = {}, b = {} need the probabilistic protocol",
            channel.a, channel.b
        )))
    }
}

fn require_family(channel: &ChannelSpec, family: ChannelFamily) -> ProtocolResult<()> {
    if channel.family == family {
        Ok(())
    } else {
        Err(ProtocolError::Config(format!("expected a {family} channel, got {}", channel.family)))
    }
}

/// Splits a per-outcome list of actions into one table per Bob.
fn per_bob_tables(
    depends_on: Vec<String>,
    n: usize,
    actions: impl IntoIterator<Item = (Vec<usize>, CorrectionAction)>,
) -> Vec<CorrectionTable> {
    let mut tables: Vec<CorrectionTable> = (0..n)
        .map(|_| CorrectionTable { depends_on: depends_on.clone(), entries: BTreeMap::new() })
        .collect();
    for (key, action) in actions {
        for (table, gate) in tables.iter_mut().zip(action.gates) {
            table.entries.insert(key.clone(), gate);
        }
    }
    tables
}

fn correction_steps(n: usize, tables: Vec<CorrectionTable>) -> Vec<Step> {
    bob_labels(n)
        .into_iter()
        .zip(tables)
        .enumerate()
        .map(|(j, (label, table))| Step::Correct { party: bob(j + 1), label, table })
        .collect()
}

fn broadcast(from: &str, measurement: &str, to: Vec<String>) -> Step {
    Step::Broadcast { from: from.into(), measurement: measurement.into(), to }
}

/// Steps of the balanced GHZ protocol.
fn ghz_steps(input: &TeleportInput) -> ProtocolResult<Vec<Step>> {
    let InputFrame::Schmidt { first, second } = &input.frame else {
        return Err(ProtocolError::Config("the GHZ protocol needs a Schmidt input frame".into()));
    };
    let (u1, u2) = restore_unitaries(first, second);
    let [q1, q2]: [Label; 2] = input_labels(2).try_into().expect("two labels");
    let [b1, b2]: [Label; 2] = bob_labels(2).try_into().expect("two labels");
    let bobs = vec![bob(1), bob(2)];

    let mut steps = vec![
        Step::Gate { party: "Alice".into(), label: q1.clone(), gate: u1.adjoint(), phase: Phase::Preparation },
        Step::Gate { party: "Alice".into(), label: q2.clone(), gate: u2.adjoint(), phase: Phase::Preparation },
        Step::Measure {
            party: "Alice".into(),
            id: ALICE_GHZ.into(),
            labels: vec![q1, q2, Label::new("A")],
            kind: MeasurementKind::Projective(ghz_basis()),
            abort_on: vec![],
        },
        broadcast("Alice", ALICE_GHZ, bobs),
    ];
    let mut actions = Vec::new();
    for i in 0..4 {
        actions.push((vec![i], ghz_correction(GhzOutcome::from_index(i)?)?));
    }
    steps.extend(correction_steps(2, per_bob_tables(vec![ALICE_GHZ.into()], 2, actions)));
    steps.push(Step::Gate { party: bob(1), label: b1, gate: u1, phase: Phase::Restoration });
    steps.push(Step::Gate { party: bob(2), label: b2, gate: u2, phase: Phase::Restoration });
    Ok(steps)
}

/// Every combination of `k` Claire outcomes, first Claire most significant.
fn claire_combinations(k: usize) -> Vec<Vec<ClaireOutcome>> {
    (0..1usize << k)
        .map(|bits| {
            (0..k)
                .map(|i| if bits >> (k - 1 - i) & 1 == 0 { ClaireOutcome::A } else { ClaireOutcome::ABar })
                .collect()
        })
        .collect()
}

/// Steps of the balanced GHZ-class (`N = 2`) or cat protocol.
fn overlap_steps(
    input: &TeleportInput,
    family: ChannelFamily,
    frames: &[OverlapFrame],
    order: MeasurementOrder,
) -> ProtocolResult<Vec<Step>> {
    let InputFrame::Product { last, .. } = &input.frame else {
        return Err(ProtocolError::Config(format!("the {family} protocol needs a product input frame")));
    };
    let n = frames.len() + 1;
    let inputs = input_labels(n);
    let bobs: Vec<String> = (1..=n).map(bob).collect();
    let (u_prime, alice_phase) = gauge_unitaries(frames, last);

    let mut steps = vec![
        Step::Gate { party: "Alice".into(), label: inputs[n - 1].clone(), gate: u_prime.clone(), phase: Phase::Preparation },
        Step::Gate { party: "Alice".into(), label: Label::new("A"), gate: alice_phase, phase: Phase::Preparation },
    ];
    let alice = vec![
        Step::Measure {
            party: "Alice".into(),
            id: ALICE_BELL.into(),
            labels: vec![inputs[n - 1].clone(), Label::new("A")],
            kind: MeasurementKind::Projective(bell_basis()),
            abort_on: vec![],
        },
        broadcast("Alice", ALICE_BELL, bobs.clone()),
    ];
    let mut claires = Vec::new();
    for (i, frame) in frames.iter().enumerate() {
        let id = claire_measurement(i + 1);
        let party = format!("Claire{}", i + 1);
        claires.push(Step::Measure {
            party: party.clone(),
            id: id.clone(),
            labels: vec![inputs[i].clone()],
            kind: MeasurementKind::Projective(frame_basis("a/abar", frame)?),
            abort_on: vec![],
        });
        claires.push(broadcast(&party, &id, bobs.clone()));
    }
    match order {
        MeasurementOrder::AliceFirst => steps.extend(alice.into_iter().chain(claires)),
        MeasurementOrder::ClairesFirst => steps.extend(claires.into_iter().chain(alice)),
    }

    let depends_on: Vec<String> =
        std::iter::once(ALICE_BELL.to_string()).chain((1..n).map(claire_measurement)).collect();
    let mut actions = Vec::new();
    for bell in BellOutcome::ALL {
        for combo in claire_combinations(n - 1) {
            let action = match family {
                ChannelFamily::GhzClass => ghz_class_correction(bell, combo[0], &frames[0]),
                _ => cat_correction(bell, &combo, frames)?,
            };
            let key = std::iter::once(bell.index()).chain(combo.iter().map(|c| c.index())).collect();
            actions.push((key, action));
        }
    }
    steps.extend(correction_steps(n, per_bob_tables(depends_on, n, actions)));
    steps.push(Step::Gate {
        party: bob(n),
        label: bob_labels(n)[n - 1].clone(),
        gate: inverse_gauge(&u_prime),
        phase: Phase::Restoration,
    });
    Ok(steps)
}

fn assemble(name: &str, input: &TeleportInput, channel: &ChannelSpec, steps: Vec<Step>) -> ProtocolResult<Protocol> {
    let (initial, parties) = build_initial_state(input, channel)?;
    let protocol = Protocol { name: name.into(), parties, initial, steps, target: input.target() };
    protocol.validate()?;
    Ok(protocol)
}

fn deterministic_steps(input: &TeleportInput, channel: &ChannelSpec, order: MeasurementOrder) -> ProtocolResult<Vec<Step>> {
    match channel.family {
        ChannelFamily::Ghz => ghz_steps(input),
        family => overlap_steps(input, family, &channel.frames(), order),
    }
}

/// Script of the GHZ-channel protocol: Alice rotates her two input qubits
/// to the computational frame, measures `(1, 2, A)` in the GHZ basis and
/// broadcasts the result; the Bobs correct and rotate back.
pub fn ghz_script(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<Protocol> {
    require_family(channel, ChannelFamily::Ghz)?;
    require_balanced(channel)?;
    check_compatible(input, channel)?;
    assemble("ghz", input, channel, ghz_steps(input)?)
}

/// Script of the three-party GHZ-class protocol.
pub fn ghz_class_script(input: &TeleportInput, channel: &ChannelSpec, order: MeasurementOrder) -> ProtocolResult<Protocol> {
    require_family(channel, ChannelFamily::GhzClass)?;
    require_balanced(channel)?;
    check_compatible(input, channel)?;
    let steps = overlap_steps(input, ChannelFamily::GhzClass, &channel.frames(), order)?;
    assemble("ghz-class", input, channel, steps)
}

/// Script of the `N`-party cat protocol.
pub fn cat_script(input: &TeleportInput, channel: &ChannelSpec, order: MeasurementOrder) -> ProtocolResult<Protocol> {
    require_family(channel, ChannelFamily::Cat)?;
    require_balanced(channel)?;
    check_compatible(input, channel)?;
    let steps = overlap_steps(input, ChannelFamily::Cat, &channel.frames(), order)?;
    assemble("cat", input, channel, steps)
}

/// Script for a channel of any family and weights: Alice filters her
/// channel qubit and announces the result to everyone. On failure the run
/// stops; on success the channel is balanced and the deterministic script
/// of the family follows.
pub fn probabilistic_script(input: &TeleportInput, channel: &ChannelSpec, order: MeasurementOrder) -> ProtocolResult<Protocol> {
    check_compatible(input, channel)?;
    let filter = filter_measurement(channel.a, channel.b)?;
    let balanced = channel.balanced();
    let others: Vec<String> = build_initial_state(input, &balanced)?
        .1
        .into_iter()
        .filter(|p| p.id != "Alice")
        .map(|p| p.id)
        .collect();
    let mut steps = vec![
        Step::Measure {
            party: "Alice".into(),
            id: FILTER.into(),
            labels: vec![Label::new("A")],
            kind: MeasurementKind::Generalized(filter.kraus().to_vec()),
            abort_on: vec![1],
        },
        broadcast("Alice", FILTER, others),
    ];
    steps.extend(deterministic_steps(input, &balanced, order)?);
    let name = format!("{}-filtered", channel.family);
    assemble(&name, input, channel, steps)
}

/// The deterministic script when the channel is balanced and the filtered
/// one otherwise.
pub fn script_for(input: &TeleportInput, channel: &ChannelSpec, order: MeasurementOrder) -> ProtocolResult<Protocol> {
    if !channel.is_balanced() {
        return probabilistic_script(input, channel, order);
    }
    match channel.family {
        ChannelFamily::Ghz => ghz_script(input, channel),
        ChannelFamily::GhzClass => ghz_class_script(input, channel, order),
        ChannelFamily::Cat => cat_script(input, channel, order),
    }
}

/// All branches of the GHZ protocol.
pub fn ghz_protocol(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<Vec<Branch>> {
    Ok(enumerate(&ghz_script(input, channel)?)?)
}

/// All branches of the GHZ-class protocol, Alice measuring first.
pub fn ghz_class_protocol(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<Vec<Branch>> {
    Ok(enumerate(&ghz_class_script(input, channel, MeasurementOrder::AliceFirst)?)?)
}

/// All branches of the cat protocol, Alice measuring first.
pub fn cat_protocol(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<Vec<Branch>> {
    Ok(enumerate(&cat_script(input, channel, MeasurementOrder::AliceFirst)?)?)
}

/// All branches of the filtered protocol; failures have `success == false`.
pub fn probabilistic_protocol(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<Vec<Branch>> {
    Ok(enumerate(&probabilistic_script(input, channel, MeasurementOrder::AliceFirst)?)?)
}

/// Enumerates the measurement stages with Alice first and with the Claires
/// first, and compares joint outcome probabilities and the conditional Bob
/// states before any correction.
pub fn order_permutation_check(input: &TeleportInput, channel: &ChannelSpec) -> ProtocolResult<OrderReport> {
    if channel.family == ChannelFamily::Ghz {
        return Err(ProtocolError::Config("the GHZ protocol has a single measurement".into()));
    }
    let first = script_for(input, channel, MeasurementOrder::AliceFirst)?.measurement_prefix();
    let second = script_for(input, channel, MeasurementOrder::ClairesFirst)?.measurement_prefix();
    Ok(compare_orderings(&first, &second)?)
}
