use std::fmt;

use crate::qstate::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Alice,
    /// 1-based index.
    Claire(usize),
    /// 1-based index.
    Bob(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Alice => write!(f, "Alice"),
            Role::Claire(i) => write!(f, "Claire{i}"),
            Role::Bob(j) => write!(f, "Bob{j}"),
        }
    }
}

/// A distant party and the qubits it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Party {
    pub id: String,
    pub role: Role,
    pub qubits: Vec<Label>,
}

impl Party {
    pub fn new(role: Role, qubits: Vec<Label>) -> Self {
        Party { id: role.to_string(), role, qubits }
    }

    pub fn owns(&self, label: &Label) -> bool {
        self.qubits.contains(label)
    }

    pub fn is_bob(&self) -> bool {
        matches!(self.role, Role::Bob(_))
    }
}
