//! Exact greedy decision trees grown leaf-wise over pre-sorted index deques.
//!
//! Classic leaf-wise (Hunt-style) tree induction re-sorts the rows of every
//! node it splits, paying `O(k n log n)` per node. This crate sorts each
//! feature exactly once, at the root, into per-feature deques of row
//! indices. From then on both per-node operations are single linear passes:
//!
//! 1. *Split search* traverses each feature's deque front-to-back,
//!    maintaining incremental label statistics, and evaluates every
//!    candidate boundary — `O(k n)` per node.
//! 2. *Branching* annotates each row with its branch, then drains every
//!    deque into a left and a right child deque. The partition is stable,
//!    so the children inherit sortedness — `O(k n)` per node, with deque
//!    blocks recycled through a pool instead of reallocated.
//!
//! The result is guaranteed to match a conventional re-sorting
//! implementation node for node; [`oracle::grow_naive`] is that
//! implementation, kept deliberately independent, and
//! [`oracle::trees_equal`] checks agreement. The `verify` CLI command and
//! the acceptance test suite run that comparison over hundreds of seeded
//! random instances.
//!
//! ```
//! use deque_tree::{grow, Dataset, GrowConfig, Labels, Prediction};
//!
//! let ds = Dataset::from_columns(
//!     vec![vec![1.0, 2.0, 3.0, 4.0]],
//!     Labels::classes(vec![0, 0, 1, 1]),
//! )
//! .unwrap();
//! let out = grow(&ds, &GrowConfig::default()).unwrap();
//! assert_eq!(out.tree.n_leaves, 2);
//! assert_eq!(out.tree.predict(&[1.5]).unwrap(), Prediction::Class(0));
//! assert_eq!(out.counters.sort_calls, 1); // one sort per feature, ever
//! ```

pub mod bench;
pub mod cli;
pub mod counters;
pub mod dataset;
pub mod deque;
pub mod grow;
pub mod model;
pub mod node;
pub mod oracle;
mod rng;
pub mod split;
pub mod stats;
pub mod synth;
pub mod tree;

pub use counters::InstrumentationCounters;
pub use dataset::{load_csv, load_libsvm, presort, Dataset, Label, Labels, SortedColumns, Task};
pub use deque::{BlockPool, IndexDeque, BLOCK_CAP};
pub use grow::{grow, grow_with_frontier, FrontierOrder, GrowConfig, GrowError, GrowOutput};
pub use model::{ModelError, ModelFile};
pub use node::{mark_branches, split_deques, BranchBuffer, BranchMark, NodeFrame};
pub use oracle::{grow_naive, trees_equal, TreeDiff};
pub use split::{best_split_for_feature, best_split_for_node, Criterion, SplitCandidate};
pub use stats::LabelStats;
pub use tree::{LeafReport, Node, PredictError, Prediction, Tree};
