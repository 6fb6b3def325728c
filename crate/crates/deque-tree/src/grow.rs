//! Leaf-wise (best-first) tree construction.
//!
//! The frontier holds every leaf still open for expansion, prioritized by
//! the gain of its cached best split (FIFO among equal gains). Each
//! iteration pops the top frame; if it may split under the configured
//! limits, its deques partition into two children whose best splits are
//! computed immediately so their priorities are known at insertion.
//! Popped frames that cannot split become final leaves.
//!
//! Without a leaf budget the frontier order does not change the finished
//! tree — every expandable frame eventually splits the same way — so the
//! order only matters when `max_leaves` cuts growth short. That is exactly
//! when best-gain-first pays: the budget is spent on the strongest splits.

use std::collections::{BinaryHeap, VecDeque};
use std::time::{Duration, Instant};

use crate::counters::InstrumentationCounters;
use crate::dataset::{presort, Dataset, Task};
use crate::deque::BlockPool;
use crate::node::{mark_branches, split_deques, BranchBuffer, NodeFrame};
use crate::split::{best_split_for_node, Criterion};
use crate::tree::{Node, Prediction, Tree};

/// Growth controls. Depth counts edges from the root (root = 0), so
/// `max_depth = d` permits at most `2^d` leaves. `max_leaves` is an
/// additional budget on the finished leaf count; unlike the depth and
/// leaf-size controls it makes the best-gain frontier order observable.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowConfig {
    pub max_depth: usize,
    pub min_leaf_samples: usize,
    pub max_leaves: Option<usize>,
    pub criterion: Criterion,
}

impl Default for GrowConfig {
    fn default() -> Self {
        GrowConfig {
            max_depth: 32,
            min_leaf_samples: 1,
            max_leaves: None,
            criterion: Criterion::Gini,
        }
    }
}

impl GrowConfig {
    pub(crate) fn validate(&self, task: Task) -> Result<(), GrowError> {
        if self.max_depth < 1 {
            return Err(GrowError::InvalidConfig("max_depth must be >= 1".into()));
        }
        if self.min_leaf_samples < 1 {
            return Err(GrowError::InvalidConfig(
                "min_leaf_samples must be >= 1".into(),
            ));
        }
        if let Some(ml) = self.max_leaves {
            if ml < 2 {
                return Err(GrowError::InvalidConfig("max_leaves must be >= 2".into()));
            }
        }
        let compatible = match self.criterion {
            Criterion::Gini | Criterion::Entropy => task == Task::Classification,
            Criterion::Variance => task == Task::Regression,
        };
        if !compatible {
            return Err(GrowError::CriterionMismatch {
                criterion: self.criterion.name(),
                task,
            });
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GrowError {
    #[error("cannot grow a tree on an empty dataset")]
    EmptyDataset,
    #[error("dataset has no feature columns")]
    NoFeatures,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("criterion {criterion} does not apply to a {task} task")]
    CriterionMismatch { criterion: &'static str, task: Task },
}

/// Frontier discipline. `BestGain` is the default; `Fifo` expands in
/// insertion order and exists to demonstrate that, absent a leaf budget,
/// the finished tree does not depend on the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierOrder {
    BestGain,
    Fifo,
}

struct Entry {
    frame: NodeFrame,
    gain: f64,
    insertion: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.insertion == other.insertion
    }
}
impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap: larger gain wins, then the earlier insertion.
        self.gain
            .total_cmp(&other.gain)
            .then(other.insertion.cmp(&self.insertion))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

enum Frontier {
    BestGain(BinaryHeap<Entry>),
    Fifo(VecDeque<Entry>),
}

impl Frontier {
    fn new(order: FrontierOrder) -> Self {
        match order {
            FrontierOrder::BestGain => Frontier::BestGain(BinaryHeap::new()),
            FrontierOrder::Fifo => Frontier::Fifo(VecDeque::new()),
        }
    }

    fn push(&mut self, entry: Entry) {
        match self {
            Frontier::BestGain(heap) => heap.push(entry),
            Frontier::Fifo(queue) => queue.push_back(entry),
        }
    }

    fn pop(&mut self) -> Option<Entry> {
        match self {
            Frontier::BestGain(heap) => heap.pop(),
            Frontier::Fifo(queue) => queue.pop_front(),
        }
    }
}

/// Everything a training run produces: the model, the work counters, and
/// the two phase timings (pre-sort is reported separately and excluded
/// from the grow time, following the usual benchmark convention here).
#[derive(Debug)]
pub struct GrowOutput {
    pub tree: Tree,
    pub counters: InstrumentationCounters,
    pub presort_time: Duration,
    pub grow_time: Duration,
}

/// Grow a tree with the default best-gain frontier.
pub fn grow(ds: &Dataset, cfg: &GrowConfig) -> Result<GrowOutput, GrowError> {
    grow_with_frontier(ds, cfg, FrontierOrder::BestGain)
}

/// Grow a tree with an explicit frontier discipline.
pub fn grow_with_frontier(
    ds: &Dataset,
    cfg: &GrowConfig,
    order: FrontierOrder,
) -> Result<GrowOutput, GrowError> {
    cfg.validate(ds.task())?;
    if ds.n_rows() == 0 {
        return Err(GrowError::EmptyDataset);
    }
    if ds.n_features() == 0 {
        return Err(GrowError::NoFeatures);
    }

    let mut counters = InstrumentationCounters::new();
    let mut pool = BlockPool::new();

    let presort_start = Instant::now();
    let sorted = presort(ds, &mut pool, &mut counters);
    let presort_time = presort_start.elapsed();

    let grow_start = Instant::now();
    let mut root = NodeFrame::root(ds, sorted);
    root.best = best_split_for_node(
        &root,
        ds,
        cfg.criterion,
        cfg.min_leaf_samples,
        &mut counters,
    );

    let mut nodes: Vec<Option<Node>> = vec![None];
    let mut frontier = Frontier::new(order);
    let mut insertion = 0u64;
    push_frame(&mut frontier, root, &mut insertion);

    let mut buf = BranchBuffer::new(ds.n_rows());
    // Leaves the finished tree would have if no further split happened:
    // frontier frames plus already-finalized leaves.
    let mut pending_leaves = 1usize;
    let mut n_leaves = 0usize;
    let mut depth = 0usize;

    while let Some(Entry { mut frame, .. }) = frontier.pop() {
        let within_budget = cfg.max_leaves.is_none_or(|limit| pending_leaves < limit);
        if frame.best.is_some() && frame.depth < cfg.max_depth && within_budget {
            let split = frame.best.take().expect("checked above");
            let (left_count, right_count) = mark_branches(&frame, ds, &split, &mut buf);
            debug_assert_eq!(left_count, split.left_count);
            debug_assert_eq!(right_count, split.right_count);

            let parent_id = frame.node_id;
            let (mut left, mut right) = split_deques(frame, ds, &buf, &mut pool, &mut counters);
            counters.nodes_split += 1;

            left.node_id = nodes.len();
            nodes.push(None);
            right.node_id = nodes.len();
            nodes.push(None);
            nodes[parent_id] = Some(Node::Internal {
                feature: split.feature,
                threshold: split.threshold,
                left: left.node_id,
                right: right.node_id,
            });
            depth = depth.max(left.depth);
            pending_leaves += 1;

            for mut child in [left, right] {
                child.best = best_split_for_node(
                    &child,
                    ds,
                    cfg.criterion,
                    cfg.min_leaf_samples,
                    &mut counters,
                );
                push_frame(&mut frontier, child, &mut insertion);
            }
        } else {
            let prediction = match ds.task() {
                Task::Classification => Prediction::Class(frame.label_stats.majority_class()),
                Task::Regression => Prediction::Value(frame.label_stats.mean()),
            };
            nodes[frame.node_id] = Some(Node::Leaf {
                prediction,
                n_samples: frame.n,
            });
            n_leaves += 1;
            frame.release(&mut pool);
        }
    }
    let grow_time = grow_start.elapsed();

    let nodes: Vec<Node> = nodes
        .into_iter()
        .map(|n| n.expect("every allocated slot is finalized"))
        .collect();
    Ok(GrowOutput {
        tree: Tree {
            nodes,
            n_features: ds.n_features(),
            task: ds.task(),
            n_leaves,
            depth,
        },
        counters,
        presort_time,
        grow_time,
    })
}

fn push_frame(frontier: &mut Frontier, frame: NodeFrame, insertion: &mut u64) {
    let gain = frame.best.as_ref().map_or(f64::NEG_INFINITY, |c| c.gain);
    frontier.push(Entry {
        frame,
        gain,
        insertion: *insertion,
    });
    *insertion += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Labels};
    use crate::oracle::{grow_naive, trees_equal};
    use crate::rng::SplitMix64;
    use crate::synth;

    fn cfg(max_depth: usize, min_leaf: usize, criterion: Criterion) -> GrowConfig {
        GrowConfig {
            max_depth,
            min_leaf_samples: min_leaf,
            max_leaves: None,
            criterion,
        }
    }

    #[test]
    fn balanced_xor_truth_table_has_no_positive_gain() {
        // The exact 4-point XOR table: every single split leaves both
        // children at gini 0.5, so the gain is exactly zero and growth
        // stops at the root. The naive grower agrees.
        let ds = Dataset::from_columns(
            vec![vec![0.0, 0.0, 1.0, 1.0], vec![0.0, 1.0, 0.0, 1.0]],
            Labels::classes(vec![0, 1, 1, 0]),
        )
        .unwrap();
        let config = cfg(2, 1, Criterion::Gini);
        let out = grow(&ds, &config).unwrap();
        assert_eq!(out.tree.n_leaves, 1);
        assert_eq!(out.counters.nodes_split, 0);
        let naive = grow_naive(&ds, &config).unwrap();
        trees_equal(&out.tree, &naive, 0.0).unwrap();
    }

    #[test]
    fn tilted_xor_is_solved_at_depth_two() {
        // Duplicating one corner tilts the class balance, so every split on
        // the path to the pure XOR partition has strictly positive gain.
        let ds = Dataset::from_columns(
            vec![vec![0.0, 0.0, 0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0, 0.0, 1.0]],
            Labels::classes(vec![0, 0, 1, 1, 0]),
        )
        .unwrap();
        let config = cfg(2, 1, Criterion::Gini);
        let out = grow(&ds, &config).unwrap();
        assert_eq!(out.tree.depth, 2);
        assert_eq!(out.tree.n_leaves, 4);
        // Training accuracy 1.0.
        for row in 0..ds.n_rows() {
            let x = [ds.value(0, row), ds.value(1, row)];
            let got = out.tree.predict(&x).unwrap();
            assert_eq!(
                got,
                Prediction::Class(match ds.label(row) {
                    crate::dataset::Label::Class(c) => c,
                    _ => unreachable!(),
                })
            );
        }
        let naive = grow_naive(&ds, &config).unwrap();
        trees_equal(&out.tree, &naive, 0.0).unwrap();
    }

    #[test]
    fn constant_labels_give_single_leaf() {
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0, 3.0, 4.0, 5.0]],
            Labels::classes(vec![1, 1, 1, 1, 1]),
        )
        .unwrap();
        let out = grow(&ds, &cfg(8, 1, Criterion::Gini)).unwrap();
        assert_eq!(out.tree.n_leaves, 1);
        assert_eq!(out.tree.depth, 0);
        assert_eq!(out.counters.nodes_split, 0);
        assert_eq!(out.tree.predict(&[3.0]).unwrap(), Prediction::Class(1));
    }

    #[test]
    fn depth_one_step_function() {
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0, 3.0, 4.0]],
            Labels::classes(vec![0, 0, 1, 1]),
        )
        .unwrap();
        let out = grow(&ds, &cfg(1, 1, Criterion::Gini)).unwrap();
        assert_eq!(out.tree.n_leaves, 2);
        assert_eq!(out.tree.depth, 1);
        match &out.tree.nodes[0] {
            Node::Internal {
                feature, threshold, ..
            } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 2.5);
            }
            other => panic!("expected internal root, got {other:?}"),
        }
        // Boundary behavior of the <= rule.
        assert_eq!(out.tree.predict(&[2.0]).unwrap(), Prediction::Class(0));
        assert_eq!(out.tree.predict(&[2.5]).unwrap(), Prediction::Class(0));
        assert_eq!(out.tree.predict(&[2.6]).unwrap(), Prediction::Class(1));
    }

    #[test]
    fn predict_validates_input() {
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0], vec![5.0, 6.0]],
            Labels::classes(vec![0, 1]),
        )
        .unwrap();
        let out = grow(&ds, &cfg(2, 1, Criterion::Gini)).unwrap();
        assert!(out.tree.predict(&[1.0]).is_err());
        assert!(out.tree.predict(&[1.0, f32::NAN]).is_err());
    }

    #[test]
    fn sort_calls_stay_at_k_regardless_of_depth() {
        let ds = synth::synthetic(2000, 6, 11, Task::Classification);
        for max_depth in [1, 4, 16, 32] {
            let out = grow(&ds, &cfg(max_depth, 1, Criterion::Gini)).unwrap();
            assert_eq!(out.counters.sort_calls, 6, "depth {max_depth}");
        }
    }

    #[test]
    fn leaf_constraints_hold() {
        let mut rng = SplitMix64::new(31);
        for trial in 0..20 {
            let (ds, _) = synth::random_instance(rng.next_u64());
            let min_leaf = 1 + (trial % 5);
            let criterion = match ds.task() {
                Task::Classification => Criterion::Gini,
                Task::Regression => Criterion::Variance,
            };
            let config = GrowConfig {
                max_depth: 5,
                min_leaf_samples: min_leaf,
                max_leaves: if trial % 2 == 0 { Some(6) } else { None },
                criterion,
            };
            let out = grow(&ds, &config).unwrap();
            let report = out.tree.leaf_report();
            assert!(report.depth <= 5);
            assert!(report
                .leaf_sizes
                .iter()
                .all(|&s| s >= min_leaf || out.tree.n_leaves == 1));
            if let Some(limit) = config.max_leaves {
                assert!(report.n_leaves <= limit, "trial {trial}");
            }
        }
    }

    #[test]
    fn max_leaves_budget_stops_growth() {
        let ds = synth::synthetic(500, 3, 5, Task::Classification);
        let unlimited = grow(&ds, &cfg(8, 1, Criterion::Gini)).unwrap();
        assert!(unlimited.tree.n_leaves > 4);
        let config = GrowConfig {
            max_leaves: Some(4),
            ..cfg(8, 1, Criterion::Gini)
        };
        let out = grow(&ds, &config).unwrap();
        assert_eq!(out.tree.n_leaves, 4);
    }

    #[test]
    fn frontier_order_is_immaterial_without_budget() {
        let mut rng = SplitMix64::new(600);
        for _ in 0..15 {
            let (ds, config) = synth::random_instance(rng.next_u64());
            let a = grow_with_frontier(&ds, &config, FrontierOrder::BestGain).unwrap();
            let b = grow_with_frontier(&ds, &config, FrontierOrder::Fifo).unwrap();
            trees_equal(&a.tree, &b.tree, 0.0).unwrap();
        }
    }

    #[test]
    fn routed_rows_land_in_their_leaf() {
        let mut rng = SplitMix64::new(808);
        for _ in 0..10 {
            let (ds, config) = synth::random_instance(rng.next_u64());
            let out = grow(&ds, &config).unwrap();
            let mut routed_counts = std::collections::HashMap::new();
            for row in 0..ds.n_rows() {
                let x: Vec<f32> = (0..ds.n_features()).map(|f| ds.value(f, row)).collect();
                let leaf = out.tree.leaf_for(&x).unwrap();
                *routed_counts.entry(leaf).or_insert(0usize) += 1;
            }
            for (idx, node) in out.tree.nodes.iter().enumerate() {
                if let Node::Leaf { n_samples, .. } = node {
                    assert_eq!(
                        routed_counts.get(&idx).copied().unwrap_or(0),
                        *n_samples,
                        "leaf {idx} population mismatch"
                    );
                }
            }
        }
    }

    #[test]
    fn leaf_report_shapes() {
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0, 3.0, 4.0]],
            Labels::classes(vec![0, 0, 1, 1]),
        )
        .unwrap();
        let single = grow(&ds, &cfg(1, 4, Criterion::Gini)).unwrap();
        let report = single.tree.leaf_report();
        assert_eq!((report.n_leaves, report.depth), (1, 0));

        let grown = grow(&ds, &cfg(2, 1, Criterion::Gini)).unwrap();
        assert!(grown.tree.leaf_report().n_leaves <= 4);
    }

    #[test]
    fn empty_dataset_is_an_error() {
        let ds = Dataset::from_columns(vec![vec![]], Labels::classes(vec![])).unwrap();
        assert!(matches!(
            grow(&ds, &GrowConfig::default()),
            Err(GrowError::EmptyDataset)
        ));
    }

    #[test]
    fn config_validation() {
        let ds = Dataset::from_columns(vec![vec![1.0, 2.0]], Labels::classes(vec![0, 1])).unwrap();
        let bad_depth = GrowConfig {
            max_depth: 0,
            ..GrowConfig::default()
        };
        assert!(matches!(
            grow(&ds, &bad_depth),
            Err(GrowError::InvalidConfig(_))
        ));
        let bad_leaf = GrowConfig {
            min_leaf_samples: 0,
            ..GrowConfig::default()
        };
        assert!(matches!(
            grow(&ds, &bad_leaf),
            Err(GrowError::InvalidConfig(_))
        ));
        let bad_budget = GrowConfig {
            max_leaves: Some(1),
            ..GrowConfig::default()
        };
        assert!(matches!(
            grow(&ds, &bad_budget),
            Err(GrowError::InvalidConfig(_))
        ));
        let mismatched = GrowConfig {
            criterion: Criterion::Variance,
            ..GrowConfig::default()
        };
        assert!(matches!(
            grow(&ds, &mismatched),
            Err(GrowError::CriterionMismatch { .. })
        ));
    }
}
