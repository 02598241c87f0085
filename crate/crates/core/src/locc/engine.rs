use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qstate::{measure, measure_generalized, subsystem_fidelity, StateVector};

use super::script::{MeasurementKind, Protocol, Step};
use super::transcript::{ClassicalMessage, Event, Transcript};
use super::{bits_for, LoccError, LoccResult};

/// Residual weight tolerated when splitting the Bob qubits off the rest.
const FACTOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub measurement: String,
    pub party: String,
    pub index: usize,
    pub name: String,
    /// Probability conditional on the earlier outcomes of the branch.
    pub probability: f64,
}

/// A leaf of the outcome tree.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcomes: Vec<OutcomeRecord>,
    pub probability: f64,
    /// `false` if the branch hit an abort outcome.
    pub success: bool,
    /// `false` if some outcome on the path had (numerically) zero probability.
    pub reachable: bool,
    /// Pure state of the Bob qubits, when they factor off the rest.
    pub bob_state: Option<StateVector>,
    /// `⟨target|ρ_Bobs|target⟩`
    pub fidelity: Option<f64>,
    pub transcript: Transcript,
}

impl Branch {
    pub fn outcome(&self, measurement: &str) -> Option<&OutcomeRecord> {
        self.outcomes.iter().find(|o| o.measurement == measurement)
    }

    /// Outcome indices keyed by measurement id.
    pub fn outcome_key(&self) -> BTreeMap<String, usize> {
        self.outcomes.iter().map(|o| (o.measurement.clone(), o.index)).collect()
    }

    /// e.g. `(psi+, a)`
    pub fn outcome_tuple(&self) -> String {
        let names: Vec<&str> = self.outcomes.iter().map(|o| o.name.as_str()).collect();
        format!("({})", names.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Enumerate,
    Sample { seed: u64 },
}

#[derive(Debug, Clone)]
pub enum RunOutput {
    Branches(Vec<Branch>),
    Sampled(Branch),
}

#[derive(Debug, Clone)]
struct Node {
    state: StateVector,
    probability: f64,
    outcomes: Vec<OutcomeRecord>,
    results: BTreeMap<String, usize>,
    events: Vec<Event>,
    aborted: bool,
}

enum Child {
    /// Child with its conditional probability.
    Alive(Node, f64),
    /// Zero-probability outcome; the branch ends without a state.
    Dead(Node),
}

struct Engine<'p> {
    protocol: &'p Protocol,
}

impl<'p> Engine<'p> {
    fn new(protocol: &'p Protocol) -> LoccResult<Self> {
        protocol.validate()?;
        Ok(Engine { protocol })
    }

    fn root(&self) -> Node {
        Node {
            state: self.protocol.initial.clone(),
            probability: 1.0,
            outcomes: vec![],
            results: BTreeMap::new(),
            events: vec![],
            aborted: false,
        }
    }

    /// Executes step `index` on `node`, returning every resulting child.
    fn advance(&self, index: usize, mut node: Node) -> LoccResult<Vec<Child>> {
        let step = &self.protocol.steps[index];
        if node.aborted {
            // after an abort only already-obtained outcomes are still announced
            match step {
                Step::Broadcast { measurement, .. } if node.results.contains_key(measurement) => {}
                _ => return Ok(vec![Child::Alive(node, 1.0)]),
            }
        }
        match step {
            Step::Gate { party, label, gate, .. } => {
                node.state = gate.apply(&node.state, label)?;
                node.events.push(Event::LocalOp {
                    party: party.clone(),
                    labels: vec![label.clone()],
                    operation: gate.name().to_owned(),
                    conditioned_on: vec![],
                });
                Ok(vec![Child::Alive(node, 1.0)])
            }
            Step::Joint { party, labels, op, .. } => {
                node.state = op.apply(&node.state, labels)?;
                node.events.push(Event::LocalOp {
                    party: party.clone(),
                    labels: labels.clone(),
                    operation: op.name().to_owned(),
                    conditioned_on: vec![],
                });
                Ok(vec![Child::Alive(node, 1.0)])
            }
            Step::Measure { party, id, labels, kind, abort_on } => {
                let outcomes = match kind {
                    MeasurementKind::Projective(basis) => measure(&node.state, labels, basis)?,
                    MeasurementKind::Generalized(kraus) => measure_generalized(&node.state, labels, kraus)?,
                };
                let mut children = Vec::new();
                for o in outcomes {
                    let mut child = node.clone();
                    child.probability *= o.probability;
                    child.outcomes.push(OutcomeRecord {
                        measurement: id.clone(),
                        party: party.clone(),
                        index: o.index,
                        name: o.name.clone(),
                        probability: o.probability,
                    });
                    child.results.insert(id.clone(), o.index);
                    child.events.push(Event::Measurement {
                        party: party.clone(),
                        id: id.clone(),
                        labels: labels.clone(),
                        basis: kind.name().to_owned(),
                        outcome: o.index,
                        outcome_name: o.name.clone(),
                        probability: o.probability,
                    });
                    match o.state {
                        Some(s) => {
                            child.state = s;
                            if abort_on.contains(&o.index) {
                                child.aborted = true;
                                child.events.push(Event::Abort {
                                    party: party.clone(),
                                    reason: format!("{id} gave {}", o.name),
                                });
                            }
                            children.push(Child::Alive(child, o.probability));
                        }
                        None => children.push(Child::Dead(child)),
                    }
                }
                Ok(children)
            }
            Step::Broadcast { from, measurement, to } => {
                let payload = node.results[measurement];
                let kind = self.protocol.measurement(measurement).expect("validated script");
                node.events.push(Event::Message(ClassicalMessage {
                    from: from.clone(),
                    to: to.clone(),
                    measurement: measurement.clone(),
                    payload,
                    payload_name: kind.outcome_name(payload),
                    bit_count: bits_for(kind.alphabet()),
                }));
                Ok(vec![Child::Alive(node, 1.0)])
            }
            Step::Correct { party, label, table } => {
                let key: Vec<usize> = table.depends_on.iter().map(|m| node.results[m]).collect();
                let gate = table.entries.get(&key).ok_or_else(|| {
                    let names: Vec<String> = table
                        .depends_on
                        .iter()
                        .zip(&key)
                        .map(|(m, &i)| {
                            self.protocol
                                .measurement(m)
                                .map(|k| k.outcome_name(i))
                                .unwrap_or_else(|| i.to_string())
                        })
                        .collect();
                    LoccError::MissingCorrection { step: index, outcomes: names.join(", ") }
                })?;
                node.state = gate.apply(&node.state, label)?;
                node.events.push(Event::LocalOp {
                    party: party.clone(),
                    labels: vec![label.clone()],
                    operation: gate.name().to_owned(),
                    conditioned_on: table.depends_on.clone(),
                });
                Ok(vec![Child::Alive(node, 1.0)])
            }
        }
    }

    fn leaf(&self, node: Node, reachable: bool) -> LoccResult<Branch> {
        let bobs = self.protocol.bob_labels();
        let (bob_state, fidelity, final_state) = if reachable {
            let fidelity = subsystem_fidelity(&node.state, &self.protocol.target)?;
            let bob_state = node.state.factor(&bobs, FACTOR_TOL).ok();
            (bob_state, Some(fidelity), Some(node.state))
        } else {
            (None, None, None)
        };
        Ok(Branch {
            outcomes: node.outcomes,
            probability: node.probability,
            success: !node.aborted,
            reachable,
            bob_state,
            fidelity,
            transcript: Transcript {
                parties: self.protocol.parties.clone(),
                events: node.events,
                final_state,
            },
        })
    }

    fn walk(&self, index: usize, node: Node, out: &mut Vec<Branch>) -> LoccResult<()> {
        if index == self.protocol.steps.len() {
            out.push(self.leaf(node, true)?);
            return Ok(());
        }
        for child in self.advance(index, node)? {
            match child {
                Child::Alive(node, _) => self.walk(index + 1, node, out)?,
                Child::Dead(node) => out.push(self.leaf(node, false)?),
            }
        }
        Ok(())
    }
}

/// Expands every measurement into all of its outcomes, depth first.
pub fn enumerate(protocol: &Protocol) -> LoccResult<Vec<Branch>> {
    let engine = Engine::new(protocol)?;
    let mut out = Vec::new();
    engine.walk(0, engine.root(), &mut out)?;
    Ok(out)
}

/// Draws branches with their exact probabilities from a seeded stream.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn sample(&mut self, protocol: &Protocol) -> LoccResult<Branch> {
        let engine = Engine::new(protocol)?;
        let mut node = engine.root();
        for index in 0..protocol.steps.len() {
            let mut children: Vec<(Node, f64)> = engine
                .advance(index, node)?
                .into_iter()
                .filter_map(|child| match child {
                    Child::Alive(node, p) => Some((node, p)),
                    Child::Dead(_) => None,
                })
                .collect();
            node = if children.len() == 1 {
                children.pop().expect("one child").0
            } else {
                let total: f64 = children.iter().map(|(_, p)| p).sum();
                let u: f64 = self.rng.random::<f64>() * total;
                let mut acc = 0.0;
                let last = children.len() - 1;
                let mut chosen = last;
                for (i, (_, p)) in children.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        chosen = i;
                        break;
                    }
                }
                children.swap_remove(chosen).0
            };
        }
        engine.leaf(node, true)
    }
}

/// One sampled branch for `seed`.
pub fn sample(protocol: &Protocol, seed: u64) -> LoccResult<Branch> {
    Sampler::new(seed).sample(protocol)
}

pub fn run_protocol(protocol: &Protocol, mode: Mode) -> LoccResult<RunOutput> {
    match mode {
        Mode::Enumerate => enumerate(protocol).map(RunOutput::Branches),
        Mode::Sample { seed } => sample(protocol, seed).map(RunOutput::Sampled),
    }
}
