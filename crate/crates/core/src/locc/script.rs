use std::collections::{BTreeMap, BTreeSet};

use crate::qstate::{Label, MeasurementBasis, Operator, SingleQubitGate, StateVector};

use super::party::Party;
use super::transcript::Violation;
use super::{bits_for, LoccError, LoccResult};

/// Coarse stage a step belongs to. Scripts can be cut after the
/// measurement stages to inspect raw conditional states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Preparation,
    Measurement,
    Correction,
    Restoration,
}

#[derive(Debug, Clone)]
pub enum MeasurementKind {
    Projective(MeasurementBasis),
    /// Kraus operators; outcome names are the operator names.
    Generalized(Vec<Operator>),
}

impl MeasurementKind {
    pub fn name(&self) -> &str {
        match self {
            MeasurementKind::Projective(b) => b.name(),
            MeasurementKind::Generalized(_) => "filter",
        }
    }

    /// Outcomes a classical message has to distinguish. A complement
    /// projector is a protocol failure that is never communicated.
    pub fn alphabet(&self) -> usize {
        match self {
            MeasurementKind::Projective(b) => b.num_listed(),
            MeasurementKind::Generalized(k) => k.len(),
        }
    }

    pub fn outcome_name(&self, index: usize) -> String {
        match self {
            MeasurementKind::Projective(b) => b.outcome_name(index).to_owned(),
            MeasurementKind::Generalized(k) => k[index].name().to_owned(),
        }
    }
}

/// Gate chosen by the outcomes of earlier measurements, keyed by outcome
/// indices in `depends_on` order.
#[derive(Debug, Clone, Default)]
pub struct CorrectionTable {
    pub depends_on: Vec<String>,
    pub entries: BTreeMap<Vec<usize>, SingleQubitGate>,
}

#[derive(Debug, Clone)]
pub enum Step {
    Gate {
        party: String,
        label: Label,
        gate: SingleQubitGate,
        phase: Phase,
    },
    /// A multi-qubit unitary. Legal only if one party owns every target.
    Joint {
        party: String,
        labels: Vec<Label>,
        op: Operator,
        phase: Phase,
    },
    Measure {
        party: String,
        id: String,
        labels: Vec<Label>,
        kind: MeasurementKind,
        /// Outcomes that end the protocol unsuccessfully.
        abort_on: Vec<usize>,
    },
    Broadcast {
        from: String,
        measurement: String,
        to: Vec<String>,
    },
    Correct {
        party: String,
        label: Label,
        table: CorrectionTable,
    },
}

impl Step {
    pub fn party(&self) -> &str {
        match self {
            Step::Gate { party, .. }
            | Step::Joint { party, .. }
            | Step::Measure { party, .. }
            | Step::Correct { party, .. } => party,
            Step::Broadcast { from, .. } => from,
        }
    }

    pub fn phase(&self) -> Phase {
        match self {
            Step::Gate { phase, .. } | Step::Joint { phase, .. } => *phase,
            Step::Measure { .. } | Step::Broadcast { .. } => Phase::Measurement,
            Step::Correct { .. } => Phase::Correction,
        }
    }

    fn labels(&self) -> Vec<&Label> {
        match self {
            Step::Gate { label, .. } | Step::Correct { label, .. } => vec![label],
            Step::Joint { labels, .. } | Step::Measure { labels, .. } => labels.iter().collect(),
            Step::Broadcast { .. } => vec![],
        }
    }
}

/// A protocol script over a fixed initial state.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub name: String,
    pub parties: Vec<Party>,
    pub initial: StateVector,
    pub steps: Vec<Step>,
    /// State the Bobs must hold at the end, on the Bob labels.
    pub target: StateVector,
}

impl Protocol {
    pub fn party(&self, id: &str) -> Option<&Party> {
        self.parties.iter().find(|p| p.id == id)
    }

    /// Bob qubit labels in party order.
    pub fn bob_labels(&self) -> Vec<Label> {
        self.parties
            .iter()
            .filter(|p| p.is_bob())
            .flat_map(|p| p.qubits.iter().cloned())
            .collect()
    }

    pub fn measurement(&self, id: &str) -> Option<&MeasurementKind> {
        self.steps.iter().find_map(|s| match s {
            Step::Measure { id: m, kind, .. } if m == id => Some(kind),
            _ => None,
        })
    }

    /// The script up to and including all measurements and messages, with
    /// corrections and restoration removed.
    pub fn measurement_prefix(&self) -> Protocol {
        let steps = self
            .steps
            .iter()
            .filter(|s| s.phase() < Phase::Correction)
            .cloned()
            .collect();
        Protocol { steps, ..self.clone() }
    }

    /// Replaces the gate used for one outcome tuple in every correction
    /// step of `party`. Returns the number of entries changed.
    pub fn override_correction(&mut self, party: &str, outcomes: &[usize], gate: SingleQubitGate) -> usize {
        let mut changed = 0;
        for step in &mut self.steps {
            if let Step::Correct { party: p, table, .. } = step {
                if p == party {
                    if let Some(slot) = table.entries.get_mut(outcomes) {
                        *slot = gate.clone();
                        changed += 1;
                    }
                }
            }
        }
        changed
    }

    /// Checks the ownership partition and that every step acts only on its
    /// party's qubits and only on outcomes already delivered to it.
    pub fn validate(&self) -> LoccResult<()> {
        let violation = |event: usize, description: String| LoccError::Locality(Violation { event, description });

        let mut owned: BTreeMap<&Label, &str> = BTreeMap::new();
        for p in &self.parties {
            for q in &p.qubits {
                if let Some(other) = owned.insert(q, &p.id) {
                    return Err(LoccError::Config(format!("qubit {q} owned by both {other} and {}", p.id)));
                }
                self.initial.position(q)?;
            }
        }
        if owned.len() != self.initial.num_qubits() {
            let stray: Vec<String> = self
                .initial
                .labels()
                .iter()
                .filter(|l| !owned.contains_key(l))
                .map(|l| l.to_string())
                .collect();
            return Err(LoccError::Config(format!("unowned qubits: {}", stray.join(", "))));
        }
        let bobs: BTreeSet<Label> = self.bob_labels().into_iter().collect();
        let target: BTreeSet<Label> = self.target.labels().iter().cloned().collect();
        if bobs != target {
            return Err(LoccError::Config("target state is not on the Bob qubits".into()));
        }

        let mut measured_by: BTreeMap<&str, &str> = BTreeMap::new();
        let mut known: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (i, step) in self.steps.iter().enumerate() {
            let party = self
                .party(step.party())
                .ok_or_else(|| violation(i, format!("unknown party {}", step.party())))?;
            for l in step.labels() {
                if !party.owns(l) {
                    let holder = owned.get(l).copied().unwrap_or("nobody");
                    return Err(violation(i, format!("{} acts on qubit {l} held by {holder}", party.id)));
                }
            }
            match step {
                Step::Measure { id, .. } => {
                    if measured_by.insert(id, &party.id).is_some() {
                        return Err(LoccError::Config(format!("measurement id {id} used twice")));
                    }
                    known.entry(&party.id).or_default().insert(id);
                }
                Step::Broadcast { from, measurement, to } => {
                    if measured_by.get(measurement.as_str()) != Some(&from.as_str()) {
                        return Err(violation(i, format!("{from} broadcasts outcome of {measurement} it did not obtain")));
                    }
                    for r in to {
                        if self.party(r).is_none() {
                            return Err(violation(i, format!("message to unknown party {r}")));
                        }
                        known.entry(r).or_default().insert(measurement);
                    }
                }
                Step::Correct { table, .. } => {
                    for m in &table.depends_on {
                        if !known.get(party.id.as_str()).is_some_and(|k| k.contains(m.as_str())) {
                            return Err(violation(
                                i,
                                format!("{} corrects on outcome of {m} before receiving it", party.id),
                            ));
                        }
                    }
                }
                Step::Gate { .. } | Step::Joint { .. } => {}
            }
        }
        Ok(())
    }

    /// Size in bits of the message announcing `measurement`.
    pub fn message_bits(&self, measurement: &str) -> u32 {
        self.measurement(measurement).map(|k| bits_for(k.alphabet())).unwrap_or(0)
    }
}
