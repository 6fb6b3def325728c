//! Best-split search: one front-to-back pass per feature deque.
//!
//! Because the deque already orders the node's rows by feature value, every
//! candidate threshold is visited by moving one row at a time from the right
//! statistics into the left and examining the boundary between adjacent
//! positions. A node costs exactly `k * (n - 1)` boundary evaluations and no
//! sorting.
//!
//! Ties are part of the contract: a candidate replaces the incumbent only on
//! strictly greater gain, features scan in ascending index and positions in
//! ascending threshold, so equal gains resolve to the lowest feature index,
//! then the lowest threshold. The naive oracle reproduces the same chain.

use crate::counters::InstrumentationCounters;
use crate::dataset::Dataset;
use crate::node::NodeFrame;
use crate::stats::LabelStats;

/// Node impurity measure. Gini and entropy apply to class histograms,
/// variance (mean squared deviation) to regression moments. All arithmetic
/// is double precision regardless of the 32-bit feature storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Gini,
    Entropy,
    Variance,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Gini => "gini",
            Criterion::Entropy => "entropy",
            Criterion::Variance => "variance",
        }
    }

    pub fn parse(s: &str) -> Option<Criterion> {
        match s {
            "gini" => Some(Criterion::Gini),
            "entropy" => Some(Criterion::Entropy),
            "variance" => Some(Criterion::Variance),
            _ => None,
        }
    }

    /// Impurity of a node with the given label statistics. Zero for a pure
    /// node; panics on empty statistics.
    pub fn impurity(&self, stats: &LabelStats) -> f64 {
        let n = stats.count();
        assert!(n > 0, "impurity of empty statistics");
        match (self, stats) {
            (Criterion::Gini, LabelStats::Histogram(counts)) => {
                let n = n as f64;
                1.0 - counts
                    .iter()
                    .map(|&c| {
                        let p = c as f64 / n;
                        p * p
                    })
                    .sum::<f64>()
            }
            (Criterion::Entropy, LabelStats::Histogram(counts)) => {
                let n = n as f64;
                -counts
                    .iter()
                    .filter(|&&c| c > 0)
                    .map(|&c| {
                        let p = c as f64 / n;
                        p * p.log2()
                    })
                    .sum::<f64>()
            }
            (Criterion::Variance, LabelStats::Moments { n, sum, sum_sq }) => {
                let n = *n as f64;
                let mean = sum / n;
                (sum_sq / n - mean * mean).max(0.0)
            }
            _ => panic!("criterion {self:?} does not apply to these statistics"),
        }
    }

    /// Weighted impurity decrease of a split. May be non-positive; callers
    /// filter. Panics if child counts do not sum to the parent count.
    pub fn gain(&self, parent: &LabelStats, left: &LabelStats, right: &LabelStats) -> f64 {
        let n = parent.count();
        let nl = left.count();
        let nr = right.count();
        assert!(nl >= 1 && nr >= 1, "gain of an empty branch");
        assert_eq!(nl + nr, n, "child counts do not sum to parent count");
        let n = n as f64;
        self.impurity(parent)
            - (nl as f64 / n) * self.impurity(left)
            - (nr as f64 / n) * self.impurity(right)
    }
}

/// One potential branch: routing rows with `feature <= threshold` left.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    /// Midpoint of two adjacent distinct feature values, in double
    /// precision. Strictly between the two values it separates.
    pub threshold: f64,
    pub gain: f64,
    pub left_count: usize,
    pub right_count: usize,
}

/// Midpoint of two adjacent 32-bit values, computed in double precision.
/// For `a < b` the result is strictly between them, so the `<=` rule always
/// sends `a` left and `b` right even when the midpoint would round to `a`
/// in 32 bits.
#[inline]
fn midpoint(a: f32, b: f32) -> f64 {
    (f64::from(a) + f64::from(b)) / 2.0
}

/// Scan feature `f`'s deque once, maintaining incremental left statistics
/// (right = node total minus left), and return the best positive-gain
/// candidate subject to `min_leaf` on both sides. Examines exactly `n - 1`
/// boundary positions.
pub fn best_split_for_feature(
    frame: &NodeFrame,
    ds: &Dataset,
    feature: usize,
    criterion: Criterion,
    min_leaf: usize,
    counters: &mut InstrumentationCounters,
) -> Option<SplitCandidate> {
    let n = frame.n;
    if n < 2 {
        return None;
    }
    let column = ds.column(feature);
    let parent = &frame.label_stats;
    let mut left = LabelStats::empty(ds);
    let mut right = LabelStats::empty(ds);
    let mut best: Option<SplitCandidate> = None;

    let mut iter = frame.deques[feature].iter();
    let mut prev = iter.next().expect("nonempty deque");
    let mut moved = 0usize;
    for row in iter {
        left.add(ds.label(prev as usize));
        moved += 1;
        counters.boundary_evals += 1;
        let a = column[prev as usize];
        let b = column[row as usize];
        if a != b && moved >= min_leaf && n - moved >= min_leaf {
            parent.minus_into(&left, &mut right);
            let gain = criterion.gain(parent, &left, &right);
            if gain > 0.0 && best.as_ref().is_none_or(|c| gain > c.gain) {
                best = Some(SplitCandidate {
                    feature,
                    threshold: midpoint(a, b),
                    gain,
                    left_count: moved,
                    right_count: n - moved,
                });
            }
        }
        prev = row;
    }
    best
}

/// Best candidate over all features. Requires `n >= 2 * min_leaf` to be
/// worth scanning (returns `None` otherwise without touching counters).
pub fn best_split_for_node(
    frame: &NodeFrame,
    ds: &Dataset,
    criterion: Criterion,
    min_leaf: usize,
    counters: &mut InstrumentationCounters,
) -> Option<SplitCandidate> {
    if frame.n < 2 * min_leaf.max(1) {
        return None;
    }
    let mut best: Option<SplitCandidate> = None;
    for feature in 0..ds.n_features() {
        if let Some(candidate) =
            best_split_for_feature(frame, ds, feature, criterion, min_leaf, counters)
        {
            if best.as_ref().is_none_or(|b| candidate.gain > b.gain) {
                best = Some(candidate);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{presort, Dataset, Labels};
    use crate::deque::BlockPool;
    use crate::rng::SplitMix64;

    fn make_frame(ds: &Dataset, pool: &mut BlockPool) -> NodeFrame {
        let mut counters = InstrumentationCounters::new();
        NodeFrame::root(ds, presort(ds, pool, &mut counters))
    }

    fn hist(counts: &[u64]) -> LabelStats {
        LabelStats::Histogram(counts.to_vec())
    }

    #[test]
    fn gini_values() {
        assert_eq!(Criterion::Gini.impurity(&hist(&[2, 2])), 0.5);
        assert_eq!(Criterion::Gini.impurity(&hist(&[3, 0])), 0.0);
        let g = Criterion::Gini.impurity(&hist(&[2, 4]));
        assert!((g - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(Criterion::Entropy.impurity(&hist(&[2, 2])), 1.0);
        assert_eq!(Criterion::Entropy.impurity(&hist(&[5, 0])), 0.0);
        // H(1/3) = log2(3) - 2/3
        let h = Criterion::Entropy.impurity(&hist(&[2, 4]));
        assert!((h - (3.0f64.log2() - 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn variance_values() {
        let stats = LabelStats::Moments {
            n: 4,
            sum: 10.0,
            sum_sq: 30.0,
        }; // values 1,2,3,4
        assert!((Criterion::Variance.impurity(&stats) - 1.25).abs() < 1e-12);
        let pure = LabelStats::Moments {
            n: 3,
            sum: 6.0,
            sum_sq: 12.0,
        }; // 2,2,2
        assert_eq!(Criterion::Variance.impurity(&pure), 0.0);
    }

    #[test]
    fn gain_values() {
        let g = Criterion::Gini;
        assert_eq!(g.gain(&hist(&[2, 2]), &hist(&[2, 0]), &hist(&[0, 2])), 0.5);
        assert_eq!(g.gain(&hist(&[2, 2]), &hist(&[1, 1]), &hist(&[1, 1])), 0.0);
        let got = g.gain(&hist(&[2, 4]), &hist(&[2, 1]), &hist(&[0, 3]));
        assert!((got - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "sum to parent")]
    fn gain_count_mismatch_panics() {
        Criterion::Gini.gain(&hist(&[2, 2]), &hist(&[1, 0]), &hist(&[0, 2]));
    }

    #[test]
    #[should_panic(expected = "empty statistics")]
    fn impurity_of_empty_stats_panics() {
        Criterion::Gini.impurity(&hist(&[0, 0]));
    }

    // Independent reference used by the derived cases and the property
    // below: enumerate every distinct-value midpoint, partition by direct
    // scan, compute statistics from scratch.
    fn brute_force_best(
        ds: &Dataset,
        rows: &[u32],
        criterion: Criterion,
        min_leaf: usize,
    ) -> Option<SplitCandidate> {
        let n = rows.len();
        let mut parent = LabelStats::empty(ds);
        for &r in rows {
            parent.add(ds.label(r as usize));
        }
        let mut best: Option<SplitCandidate> = None;
        for feature in 0..ds.n_features() {
            let mut values: Vec<f32> = rows
                .iter()
                .map(|&r| ds.value(feature, r as usize))
                .collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            values.dedup();
            for pair in values.windows(2) {
                let threshold = (f64::from(pair[0]) + f64::from(pair[1])) / 2.0;
                let mut left = LabelStats::empty(ds);
                let mut right = LabelStats::empty(ds);
                let mut left_count = 0usize;
                for &r in rows {
                    if f64::from(ds.value(feature, r as usize)) <= threshold {
                        left.add(ds.label(r as usize));
                        left_count += 1;
                    } else {
                        right.add(ds.label(r as usize));
                    }
                }
                if left_count < min_leaf || n - left_count < min_leaf {
                    continue;
                }
                let gain = criterion.gain(&parent, &left, &right);
                if gain <= 0.0 {
                    continue;
                }
                let candidate = SplitCandidate {
                    feature,
                    threshold,
                    gain,
                    left_count,
                    right_count: n - left_count,
                };
                let replace = match &best {
                    None => true,
                    Some(b) => {
                        gain > b.gain
                            || (gain == b.gain && feature < b.feature)
                            || (gain == b.gain && feature == b.feature && threshold < b.threshold)
                    }
                };
                if replace {
                    best = Some(candidate);
                }
            }
        }
        best
    }

    #[test]
    fn feature_scan_matches_brute_force_on_clean_step() {
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0, 3.0, 4.0]],
            Labels::classes(vec![0, 0, 1, 1]),
        )
        .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        let got =
            best_split_for_feature(&frame, &ds, 0, Criterion::Gini, 1, &mut counters).unwrap();
        let expected = brute_force_best(&ds, &[0, 1, 2, 3], Criterion::Gini, 1).unwrap();
        assert_eq!(got, expected);
        // Frozen values, derived by enumerating the three boundaries.
        assert_eq!(got.threshold, 2.5);
        assert_eq!(got.gain, 0.5);
        assert_eq!((got.left_count, got.right_count), (2, 2));
        assert_eq!(counters.boundary_evals, 3);
    }

    #[test]
    fn constant_feature_yields_none() {
        let ds = Dataset::from_columns(vec![vec![1.0, 1.0, 1.0]], Labels::classes(vec![0, 1, 0]))
            .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        assert_eq!(
            best_split_for_feature(&frame, &ds, 0, Criterion::Gini, 1, &mut counters),
            None
        );
        assert_eq!(counters.boundary_evals, 2);
    }

    #[test]
    fn min_leaf_filters_to_zero_gain_boundary() {
        // Only the middle boundary is admissible at min_leaf 2, and its gain
        // is zero, so there is no candidate.
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0, 3.0, 4.0]],
            Labels::classes(vec![0, 1, 0, 1]),
        )
        .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        assert_eq!(
            best_split_for_feature(&frame, &ds, 0, Criterion::Gini, 2, &mut counters),
            None
        );
        assert_eq!(
            brute_force_best(&ds, &[0, 1, 2, 3], Criterion::Gini, 2),
            None
        );
    }

    #[test]
    fn node_search_picks_separating_feature() {
        // Feature 1 separates the labels perfectly, feature 0 alternates.
        let ds = Dataset::from_columns(
            vec![vec![1.0, 2.0, 3.0, 4.0], vec![5.0, 6.0, 5.5, 6.5]],
            Labels::classes(vec![0, 1, 0, 1]),
        )
        .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        let got = best_split_for_node(&frame, &ds, Criterion::Gini, 1, &mut counters).unwrap();
        let expected = brute_force_best(&ds, &[0, 1, 2, 3], Criterion::Gini, 1).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got.feature, 1);
        assert_eq!(got.gain, 0.5);
        assert_eq!(counters.boundary_evals, 2 * 3);
    }

    #[test]
    fn identical_columns_tie_break_to_lower_feature() {
        let col = vec![1.0, 2.0, 3.0, 4.0];
        let ds = Dataset::from_columns(vec![col.clone(), col], Labels::classes(vec![0, 0, 1, 1]))
            .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        let got = best_split_for_node(&frame, &ds, Criterion::Gini, 1, &mut counters).unwrap();
        assert_eq!(got.feature, 0);
    }

    #[test]
    fn pure_node_has_no_candidate() {
        let ds = Dataset::from_columns(vec![vec![1.0, 2.0, 3.0]], Labels::classes(vec![1, 1, 1]))
            .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        assert_eq!(
            best_split_for_node(&frame, &ds, Criterion::Gini, 1, &mut counters),
            None
        );
    }

    #[test]
    fn below_two_min_leaf_skips_scan() {
        let ds = Dataset::from_columns(vec![vec![1.0, 2.0, 3.0]], Labels::classes(vec![0, 1, 0]))
            .unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let mut counters = InstrumentationCounters::new();
        assert_eq!(
            best_split_for_node(&frame, &ds, Criterion::Gini, 2, &mut counters),
            None
        );
        assert_eq!(counters.boundary_evals, 0);
    }

    #[test]
    fn threshold_separates_distinct_present_values() {
        let mut rng = SplitMix64::new(321);
        for trial in 0..50 {
            let n = 2 + rng.next_below(60) as usize;
            let col: Vec<f32> = (0..n).map(|_| (rng.next_below(10) as f32) * 0.5).collect();
            let labels: Vec<u32> = (0..n).map(|_| rng.next_below(3) as u32).collect();
            let ds = Dataset::from_columns(vec![col.clone()], Labels::classes(labels)).unwrap();
            let mut pool = BlockPool::new();
            let frame = make_frame(&ds, &mut pool);
            let mut counters = InstrumentationCounters::new();
            if let Some(c) =
                best_split_for_feature(&frame, &ds, 0, Criterion::Gini, 1, &mut counters)
            {
                let below = col
                    .iter()
                    .filter(|&&v| f64::from(v) <= c.threshold)
                    .fold(f32::NEG_INFINITY, |m, &v| m.max(v));
                let above = col
                    .iter()
                    .filter(|&&v| f64::from(v) > c.threshold)
                    .fold(f32::INFINITY, |m, &v| m.min(v));
                assert!(below < above, "trial {trial}: threshold not separating");
                assert!(f64::from(below) < c.threshold && c.threshold < f64::from(above));
            }
        }
    }

    #[test]
    fn incremental_left_stats_match_batch_prefix() {
        // Regression moments: prefix accumulation must match a from-scratch
        // scan at every position within 1e-9 relative.
        let mut rng = SplitMix64::new(777);
        let n = 200usize;
        let col: Vec<f32> = (0..n).map(|_| rng.next_f64() as f32).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
        let ds = Dataset::from_columns(vec![col], Labels::values(ys)).unwrap();
        let mut pool = BlockPool::new();
        let frame = make_frame(&ds, &mut pool);
        let order: Vec<u32> = frame.deques[0].iter().collect();

        let mut incremental = LabelStats::empty(&ds);
        for (i, &row) in order.iter().enumerate() {
            incremental.add(ds.label(row as usize));
            let mut batch = LabelStats::empty(&ds);
            for &r in &order[..=i] {
                batch.add(ds.label(r as usize));
            }
            match (&incremental, &batch) {
                (
                    LabelStats::Moments {
                        n: n1,
                        sum: s1,
                        sum_sq: q1,
                    },
                    LabelStats::Moments {
                        n: n2,
                        sum: s2,
                        sum_sq: q2,
                    },
                ) => {
                    assert_eq!(n1, n2);
                    assert!((s1 - s2).abs() <= 1e-9 * s2.abs().max(1.0));
                    assert!((q1 - q2).abs() <= 1e-9 * q2.abs().max(1.0));
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn node_search_matches_brute_force_on_random_nodes() {
        // Exhaustiveness over random small nodes with duplicated values,
        // classification and regression.
        let mut rng = SplitMix64::new(2024);
        for trial in 0..120 {
            let n = 2 + rng.next_below(63) as usize;
            let k = 1 + rng.next_below(4) as usize;
            let columns: Vec<Vec<f32>> = (0..k)
                .map(|_| {
                    let levels = 2 + rng.next_below(n as u64 / 2 + 1);
                    (0..n)
                        .map(|_| (rng.next_below(levels) as f32) * 0.25)
                        .collect()
                })
                .collect();
            let regression = trial % 3 == 2;
            let labels = if regression {
                Labels::values((0..n).map(|_| rng.next_below(8) as f64).collect())
            } else {
                Labels::classes((0..n).map(|_| rng.next_below(3) as u32).collect())
            };
            let criterion = if regression {
                Criterion::Variance
            } else if trial % 2 == 0 {
                Criterion::Gini
            } else {
                Criterion::Entropy
            };
            let min_leaf = 1 + rng.next_below(3) as usize;
            let ds = Dataset::from_columns(columns, labels).unwrap();
            let mut pool = BlockPool::new();
            let frame = make_frame(&ds, &mut pool);
            let mut counters = InstrumentationCounters::new();
            let got = best_split_for_node(&frame, &ds, criterion, min_leaf, &mut counters);
            let rows: Vec<u32> = (0..n as u32).collect();
            let expected = if n >= 2 * min_leaf {
                brute_force_best(&ds, &rows, criterion, min_leaf)
            } else {
                None
            };
            match (&got, &expected) {
                (None, None) => {}
                (Some(g), Some(e)) => {
                    assert_eq!(g.feature, e.feature, "trial {trial}");
                    assert!((g.threshold - e.threshold).abs() <= 1e-9, "trial {trial}");
                    assert!((g.gain - e.gain).abs() <= 1e-9, "trial {trial}");
                    assert_eq!(g.left_count, e.left_count, "trial {trial}");
                }
                other => panic!("trial {trial}: {other:?}"),
            }
            if n >= 2 * min_leaf {
                assert_eq!(counters.boundary_evals, (k * (n - 1)) as u64);
            }
        }
    }

    #[test]
    fn affine_feature_map_preserves_choice() {
        // Strictly increasing affine maps with exactly representable
        // parameters: the chosen feature, gain, and partition are unchanged.
        let mut rng = SplitMix64::new(4242);
        let slopes = [0.5f32, 1.0, 2.0, 4.0];
        let offsets = [-2.0f32, 0.0, 0.25, 3.0];
        for trial in 0..60 {
            let n = 4 + rng.next_below(40) as usize;
            let k = 1 + rng.next_below(3) as usize;
            let columns: Vec<Vec<f32>> = (0..k)
                .map(|_| {
                    (0..n)
                        .map(|_| (rng.next_below(128) as f32 - 64.0) * 0.25)
                        .collect()
                })
                .collect();
            let labels: Vec<u32> = (0..n).map(|_| rng.next_below(2) as u32).collect();
            let ds =
                Dataset::from_columns(columns.clone(), Labels::classes(labels.clone())).unwrap();

            let mapped_feature = rng.next_below(k as u64) as usize;
            let slope = slopes[rng.next_below(4) as usize];
            let offset = offsets[rng.next_below(4) as usize];
            let mut mapped_cols = columns;
            for v in &mut mapped_cols[mapped_feature] {
                *v = *v * slope + offset;
            }
            let mapped = Dataset::from_columns(mapped_cols, Labels::classes(labels)).unwrap();

            let mut pool = BlockPool::new();
            let frame = make_frame(&ds, &mut pool);
            let mut mpool = BlockPool::new();
            let mframe = make_frame(&mapped, &mut mpool);
            let mut c1 = InstrumentationCounters::new();
            let mut c2 = InstrumentationCounters::new();
            let a = best_split_for_node(&frame, &ds, Criterion::Gini, 1, &mut c1);
            let b = best_split_for_node(&mframe, &mapped, Criterion::Gini, 1, &mut c2);
            match (a, b) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    assert_eq!(a.feature, b.feature, "trial {trial}");
                    assert_eq!(a.gain, b.gain, "trial {trial}");
                    assert_eq!(a.left_count, b.left_count, "trial {trial}");
                    if a.feature == mapped_feature {
                        let want = a.threshold * f64::from(slope) + f64::from(offset);
                        assert!((b.threshold - want).abs() < 1e-9, "trial {trial}");
                    } else {
                        assert_eq!(a.threshold, b.threshold, "trial {trial}");
                    }
                }
                other => panic!("trial {trial}: {other:?}"),
            }
        }
    }
}
