use std::collections::{BTreeMap, BTreeSet};

use crate::qstate::fidelity;

use super::engine::{enumerate, Branch};
use super::script::Protocol;
use super::{LoccError, LoccResult};

/// Comparison of two orderings of the same measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub branches: usize,
    /// Largest difference in joint outcome probability.
    pub max_probability_defect: f64,
    /// Smallest fidelity between matching conditional Bob states.
    pub min_state_fidelity: f64,
}

impl OrderReport {
    pub fn passes(&self, prob_tol: f64, fidelity_tol: f64) -> bool {
        self.max_probability_defect < prob_tol && self.min_state_fidelity >= 1.0 - fidelity_tol
    }
}

/// Enumerates both scripts and matches their reachable leaves by joint
/// outcome. A leaf reachable in only one ordering counts with probability 0
/// on the other side.
pub fn compare_orderings(first: &Protocol, second: &Protocol) -> LoccResult<OrderReport> {
    let index = |branches: Vec<Branch>| -> BTreeMap<BTreeMap<String, usize>, Branch> {
        branches
            .into_iter()
            .filter(|b| b.reachable)
            .map(|b| (b.outcome_key(), b))
            .collect()
    };
    let a = index(enumerate(first)?);
    let b = index(enumerate(second)?);
    let keys: BTreeSet<&BTreeMap<String, usize>> = a.keys().chain(b.keys()).collect();

    let mut max_probability_defect: f64 = 0.0;
    let mut min_state_fidelity: f64 = 1.0;
    for key in &keys {
        let (x, y) = (a.get(*key), b.get(*key));
        let p = |br: Option<&Branch>| br.map_or(0.0, |br| br.probability);
        max_probability_defect = max_probability_defect.max((p(x) - p(y)).abs());
        if let (Some(x), Some(y)) = (x, y) {
            match (&x.bob_state, &y.bob_state) {
                (Some(s), Some(t)) => min_state_fidelity = min_state_fidelity.min(fidelity(s, t)?),
                _ => {
                    return Err(LoccError::Config(format!(
                        "Bob qubits are entangled with the rest after outcomes {}",
                        x.outcome_tuple()
                    )))
                }
            }
        }
    }
    Ok(OrderReport { branches: keys.len(), max_probability_defect, min_state_fidelity })
}
