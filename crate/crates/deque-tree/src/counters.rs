//! Work counters threaded through the training pipeline.
//!
//! The whole point of growing over pre-sorted deques is a fixed work profile:
//! sorting happens exactly once per feature, a node's split search examines
//! exactly `k * (n - 1)` candidate boundaries, and partitioning a node moves
//! exactly `k * n` elements. The counters record what actually happened so
//! tests (and the bench command) can assert those identities instead of
//! trusting the asymptotic claim.

use std::fmt;

/// Monotone counters populated during a single `grow` run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InstrumentationCounters {
    /// Number of times a sort routine ran. Stays equal to the number of
    /// features, whatever the tree depth.
    pub sort_calls: u64,
    /// Candidate boundaries examined by split search (one per adjacent pair
    /// in a scanned deque, admissible or not).
    pub boundary_evals: u64,
    /// Elements appended to a child deque while partitioning a node.
    pub element_moves: u64,
    /// Nodes turned from leaf into internal node.
    pub nodes_split: u64,
}

impl InstrumentationCounters {
    pub fn new() -> Self {
        Self::default()
    }
}

impl fmt::Display for InstrumentationCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sort_calls={} boundary_evals={} element_moves={} nodes_split={}",
            self.sort_calls, self.boundary_evals, self.element_moves, self.nodes_split
        )
    }
}
