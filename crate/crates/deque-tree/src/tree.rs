//! The grown model: an indexed node pool with internal nodes and leaves.

use std::fmt;

use crate::dataset::Task;

/// Leaf output: majority class id or mean label value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    Class(u32),
    Value(f64),
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Class(c) => write!(f, "{c}"),
            Prediction::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Internal {
        feature: usize,
        /// Rows with `value <= threshold` descend left.
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        prediction: Prediction,
        n_samples: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum PredictError {
    #[error("row has {got} features, model expects {want}")]
    WrongArity { got: usize, want: usize },
    #[error("feature {feature} is not finite ({value})")]
    NonFinite { feature: usize, value: f32 },
}

/// A grown decision tree. Node 0 is the root; children are indices into the
/// same pool. Immutable after growth and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<Node>,
    pub n_features: usize,
    pub task: Task,
    pub n_leaves: usize,
    pub depth: usize,
}

impl Tree {
    pub fn root(&self) -> usize {
        0
    }

    /// Route one row from the root to a leaf: left iff `value <= threshold`.
    pub fn predict(&self, row: &[f32]) -> Result<Prediction, PredictError> {
        if row.len() != self.n_features {
            return Err(PredictError::WrongArity {
                got: row.len(),
                want: self.n_features,
            });
        }
        for (feature, &value) in row.iter().enumerate() {
            if !value.is_finite() {
                return Err(PredictError::NonFinite { feature, value });
            }
        }
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if f64::from(row[*feature]) <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                Node::Leaf { prediction, .. } => return Ok(*prediction),
            }
        }
    }

    /// Leaf index the row lands in (same routing as `predict`).
    pub fn leaf_for(&self, row: &[f32]) -> Result<usize, PredictError> {
        if row.len() != self.n_features {
            return Err(PredictError::WrongArity {
                got: row.len(),
                want: self.n_features,
            });
        }
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if f64::from(row[*feature]) <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                Node::Leaf { .. } => return Ok(at),
            }
        }
    }

    pub fn n_internal(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Internal { .. }))
            .count()
    }

    /// Summary of the leaves: counts, depth, per-leaf sample sizes.
    pub fn leaf_report(&self) -> LeafReport {
        let mut leaf_sizes = Vec::with_capacity(self.n_leaves);
        self.collect_leaf_sizes(0, &mut leaf_sizes);
        LeafReport {
            n_leaves: self.n_leaves,
            depth: self.depth,
            leaf_sizes,
        }
    }

    fn collect_leaf_sizes(&self, at: usize, out: &mut Vec<usize>) {
        match &self.nodes[at] {
            Node::Internal { left, right, .. } => {
                self.collect_leaf_sizes(*left, out);
                self.collect_leaf_sizes(*right, out);
            }
            Node::Leaf { n_samples, .. } => out.push(*n_samples),
        }
    }

    fn fmt_node(&self, f: &mut fmt::Formatter<'_>, at: usize, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match &self.nodes[at] {
            Node::Internal {
                feature,
                threshold,
                left,
                right,
            } => {
                writeln!(f, "{pad}node {at}: feature {feature} <= {threshold}")?;
                self.fmt_node(f, *left, indent + 1)?;
                self.fmt_node(f, *right, indent + 1)
            }
            Node::Leaf {
                prediction,
                n_samples,
            } => writeln!(f, "{pad}node {at}: leaf {prediction} (n={n_samples})"),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "tree: {} task, {} features, {} leaves, depth {}",
            self.task, self.n_features, self.n_leaves, self.depth
        )?;
        self.fmt_node(f, 0, 1)
    }
}

/// Per-tree leaf summary, printable as one bench-style row.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafReport {
    pub n_leaves: usize,
    pub depth: usize,
    pub leaf_sizes: Vec<usize>,
}

impl fmt::Display for LeafReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let min = self.leaf_sizes.iter().min().copied().unwrap_or(0);
        let max = self.leaf_sizes.iter().max().copied().unwrap_or(0);
        write!(
            f,
            "n_leaves={} depth={} leaf_size_min={min} leaf_size_max={max}",
            self.n_leaves, self.depth
        )
    }
}
