//! Index bookkeeping for addressing a subset of qubits inside a register.

/// Splits the amplitude index space of an `n`-qubit register into a
/// "target" part (the listed positions, first position most significant)
/// and the remaining "rest" part.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    /// Full-register offset of every target configuration.
    pub target_offsets: Vec<usize>,
    /// Full-register index of every rest configuration with target bits zero.
    pub rest_bases: Vec<usize>,
}

impl Split {
    /// `positions` are qubit positions (0 = first label = most significant).
    pub fn new(num_qubits: usize, positions: &[usize]) -> Self {
        let shift = |p: usize| num_qubits - 1 - p;
        let rest: Vec<usize> = (0..num_qubits).filter(|p| !positions.contains(p)).collect();
        Split { target_offsets: offsets(positions.iter().map(|&p| shift(p))), rest_bases: offsets(rest.into_iter().map(shift)) }
    }

    pub fn index(&self, target: usize, rest: usize) -> usize {
        self.rest_bases[rest] | self.target_offsets[target]
    }

    pub fn target_dim(&self) -> usize {
        self.target_offsets.len()
    }

    pub fn rest_dim(&self) -> usize {
        self.rest_bases.len()
    }
}

/// All `2^k` sums of the given bit shifts, the first shift varying slowest.
fn offsets(shifts: impl Iterator<Item = usize>) -> Vec<usize> {
    shifts.fold(vec![0], |acc, s| acc.iter().flat_map(|&b| [b, b | (1 << s)]).collect())
}
