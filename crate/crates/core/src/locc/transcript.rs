use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::qstate::{Label, StateVector};

use super::party::Party;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalMessage {
    pub from: String,
    pub to: Vec<String>,
    pub measurement: String,
    pub payload: usize,
    pub payload_name: String,
    pub bit_count: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    LocalOp {
        party: String,
        labels: Vec<Label>,
        operation: String,
        /// Measurements whose outcomes selected this operation.
        conditioned_on: Vec<String>,
    },
    Measurement {
        party: String,
        id: String,
        labels: Vec<Label>,
        basis: String,
        outcome: usize,
        outcome_name: String,
        probability: f64,
    },
    Message(ClassicalMessage),
    Abort {
        party: String,
        reason: String,
    },
}

/// Everything that happened along one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub parties: Vec<Party>,
    pub events: Vec<Event>,
    /// Joint state at the end; `None` for zero-probability branches.
    pub final_state: Option<StateVector>,
}

impl Transcript {
    pub fn messages(&self) -> impl Iterator<Item = &ClassicalMessage> {
        self.events.iter().filter_map(|e| match e {
            Event::Message(m) => Some(m),
            _ => None,
        })
    }

    /// Total bits sent by `party`.
    pub fn bits_sent_by(&self, party: &str) -> u32 {
        self.messages().filter(|m| m.from == party).map(|m| m.bit_count).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Index of the offending event (or script step).
    pub event: usize,
    pub description: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event {}: {}", self.event, self.description)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalityReport {
    pub violations: Vec<Violation>,
}

impl LocalityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every operation touches only qubits owned by its party and
/// that every outcome-dependent operation comes after a message (or a
/// local measurement) giving that party the outcome.
pub fn validate_locality(transcript: &Transcript) -> LocalityReport {
    let owner: BTreeMap<&Label, &str> = transcript
        .parties
        .iter()
        .flat_map(|p| p.qubits.iter().map(move |q| (q, p.id.as_str())))
        .collect();
    let mut known: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut measured_by: BTreeMap<&str, &str> = BTreeMap::new();
    let mut violations = Vec::new();

    let check_labels = |i: usize, party: &str, labels: &[Label], violations: &mut Vec<Violation>| {
        for l in labels {
            match owner.get(l) {
                Some(&o) if o == party => {}
                Some(&o) => violations.push(Violation {
                    event: i,
                    description: format!("{party} acts on qubit {l} held by {o}"),
                }),
                None => violations.push(Violation {
                    event: i,
                    description: format!("{party} acts on unknown qubit {l}"),
                }),
            }
        }
    };

    for (i, event) in transcript.events.iter().enumerate() {
        match event {
            Event::LocalOp { party, labels, operation, conditioned_on } => {
                check_labels(i, party, labels, &mut violations);
                for m in conditioned_on {
                    if !known.get(party.as_str()).is_some_and(|k| k.contains(m.as_str())) {
                        violations.push(Violation {
                            event: i,
                            description: format!("{party} applies {operation} depending on {m} before learning it"),
                        });
                    }
                }
            }
            Event::Measurement { party, id, labels, .. } => {
                check_labels(i, party, labels, &mut violations);
                measured_by.insert(id, party);
                known.entry(party).or_default().insert(id);
            }
            Event::Message(msg) => {
                if measured_by.get(msg.measurement.as_str()) != Some(&msg.from.as_str()) {
                    violations.push(Violation {
                        event: i,
                        description: format!("{} sends outcome of {} it never obtained", msg.from, msg.measurement),
                    });
                }
                for r in &msg.to {
                    known.entry(r).or_default().insert(&msg.measurement);
                }
            }
            Event::Abort { .. } => {}
        }
    }
    LocalityReport { violations }
}

fn join(labels: &[Label]) -> String {
    labels.iter().map(Label::as_str).collect::<Vec<_>>().join(",")
}

/// One line per event.
impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.parties {
            writeln!(f, "party {} holds [{}]", p.id, join(&p.qubits))?;
        }
        for (i, e) in self.events.iter().enumerate() {
            match e {
                Event::LocalOp { party, labels, operation, conditioned_on } => {
                    write!(f, "{i:>3} {party}: apply {operation} on [{}]", join(labels))?;
                    if !conditioned_on.is_empty() {
                        write!(f, " given {}", conditioned_on.join(","))?;
                    }
                    writeln!(f)?;
                }
                Event::Measurement { party, id, labels, basis, outcome_name, probability, .. } => writeln!(
                    f,
                    "{i:>3} {party}: measure {id} on [{}] in {basis} basis -> {outcome_name} (p = {probability:.12})",
                    join(labels)
                )?,
                Event::Message(m) => writeln!(
                    f,
                    "{i:>3} {} -> {}: {} = {} ({} bit{})",
                    m.from,
                    m.to.join(","),
                    m.measurement,
                    m.payload_name,
                    m.bit_count,
                    if m.bit_count == 1 { "" } else { "s" }
                )?,
                Event::Abort { party, reason } => writeln!(f, "{i:>3} {party}: abort ({reason})")?,
            }
        }
        Ok(())
    }
}
