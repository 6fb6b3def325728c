//! Frontier leaves and the order-preserving branch partition.
//!
//! A [`NodeFrame`] is one leaf still under consideration: `k` deques over the
//! same row set, each sorted by its feature. Splitting first annotates every
//! row with its branch (one linear pass over the split feature's deque into a
//! reusable [`BranchBuffer`]), then drains every deque front-to-back, sending
//! each row to the back of the matching child deque. Both children are
//! subsequences of the parent, so sortedness is inherited rather than
//! recomputed — no sort call ever runs after the initial pre-sort.

use crate::counters::InstrumentationCounters;
use crate::dataset::{Dataset, SortedColumns};
use crate::deque::{BlockPool, IndexDeque};
use crate::split::SplitCandidate;
use crate::stats::LabelStats;

/// Branch annotation for one row. Marks written for a split are always
/// rewritten before the next split reads them, so stale values are never
/// consulted; `Unmarked` exists to catch violations in debug builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum BranchMark {
    Unmarked = 0,
    Left = 1,
    Right = 2,
}

/// Per-row branch marks, allocated once at dataset size and reused for every
/// split in a training run. One buffer serves one split at a time; parallel
/// node expansion would need a buffer per worker.
#[derive(Debug)]
pub struct BranchBuffer {
    marks: Vec<BranchMark>,
}

impl BranchBuffer {
    pub fn new(n_rows: usize) -> Self {
        BranchBuffer {
            marks: vec![BranchMark::Unmarked; n_rows],
        }
    }

    #[inline]
    pub fn get(&self, row: u32) -> BranchMark {
        self.marks[row as usize]
    }

    #[inline]
    fn set(&mut self, row: u32, mark: BranchMark) {
        self.marks[row as usize] = mark;
    }
}

/// A frontier leaf: its deques, label statistics, and cached best split.
#[derive(Debug)]
pub struct NodeFrame {
    pub node_id: usize,
    pub depth: usize,
    /// Samples at this node (each deque has exactly this many indices).
    pub n: usize,
    pub deques: Vec<IndexDeque>,
    pub label_stats: LabelStats,
    pub best: Option<SplitCandidate>,
}

impl NodeFrame {
    /// Root frame over the whole dataset. Label statistics accumulate in
    /// feature-0 deque order; children keep that convention, which pins the
    /// floating-point accumulation order for regression.
    pub fn root(ds: &Dataset, sorted: SortedColumns) -> NodeFrame {
        let mut stats = LabelStats::empty(ds);
        for row in sorted.deques[0].iter() {
            stats.add(ds.label(row as usize));
        }
        NodeFrame {
            node_id: 0,
            depth: 0,
            n: ds.n_rows(),
            deques: sorted.deques,
            label_stats: stats,
            best: None,
        }
    }

    /// Hand all deque blocks back to the pool (frame becomes a final leaf).
    pub fn release(&mut self, pool: &mut BlockPool) {
        for dq in &mut self.deques {
            dq.release_all(pool);
        }
    }
}

/// Annotate each row of the frame with the branch the split sends it to:
/// `Left` iff the split feature's value is `<=` the threshold. Returns
/// `(left_count, right_count)`.
pub fn mark_branches(
    frame: &NodeFrame,
    ds: &Dataset,
    split: &SplitCandidate,
    buf: &mut BranchBuffer,
) -> (usize, usize) {
    let column = ds.column(split.feature);
    let mut left = 0usize;
    let mut right = 0usize;
    for row in frame.deques[split.feature].iter() {
        if f64::from(column[row as usize]) <= split.threshold {
            buf.set(row, BranchMark::Left);
            left += 1;
        } else {
            buf.set(row, BranchMark::Right);
            right += 1;
        }
    }
    debug_assert_eq!(left + right, frame.n);
    (left, right)
}

/// Divide the frame into left and right children per the marks in `buf`,
/// consuming the parent. Every deque drains front-to-back and each index is
/// appended to the back of the matching child deque, so child order is the
/// parent order restricted to the child's rows. Child label statistics are
/// accumulated during the feature-0 pass. Exactly `k * n` element moves.
pub fn split_deques(
    mut frame: NodeFrame,
    ds: &Dataset,
    buf: &BranchBuffer,
    pool: &mut BlockPool,
    counters: &mut InstrumentationCounters,
) -> (NodeFrame, NodeFrame) {
    let k = frame.deques.len();
    let mut left_deques = Vec::with_capacity(k);
    let mut right_deques = Vec::with_capacity(k);
    let mut left_stats = LabelStats::empty(ds);
    let mut right_stats = LabelStats::empty(ds);

    for (f, parent) in frame.deques.iter_mut().enumerate() {
        let mut left = IndexDeque::new();
        let mut right = IndexDeque::new();
        while let Some(row) = parent.pop_front(pool) {
            counters.element_moves += 1;
            match buf.get(row) {
                BranchMark::Left => {
                    left.push_back(row, pool);
                    if f == 0 {
                        left_stats.add(ds.label(row as usize));
                    }
                }
                BranchMark::Right => {
                    right.push_back(row, pool);
                    if f == 0 {
                        right_stats.add(ds.label(row as usize));
                    }
                }
                BranchMark::Unmarked => unreachable!("row {row} not marked for this split"),
            }
        }
        left_deques.push(left);
        right_deques.push(right);
    }

    let left_n = left_deques[0].len();
    let right_n = right_deques[0].len();
    debug_assert_eq!(left_n + right_n, frame.n);
    debug_assert!(left_deques.iter().all(|d| d.len() == left_n));
    debug_assert!(right_deques.iter().all(|d| d.len() == right_n));

    let depth = frame.depth + 1;
    (
        NodeFrame {
            node_id: 0,
            depth,
            n: left_n,
            deques: left_deques,
            label_stats: left_stats,
            best: None,
        },
        NodeFrame {
            node_id: 0,
            depth,
            n: right_n,
            deques: right_deques,
            label_stats: right_stats,
            best: None,
        },
    )
}
