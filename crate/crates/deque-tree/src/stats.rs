//! Sufficient statistics of the labels at a node.
//!
//! Classification keeps an integer class histogram, so every add/subtract is
//! exact and two implementations that accumulate the same rows in any order
//! agree bit for bit. Regression keeps count/sum/sum-of-squares in double
//! precision; accumulation order is fixed by the callers (ascending value of
//! feature 0, ties by row index) so the deque-based grower and the naive
//! oracle produce identical doubles.

use crate::dataset::{Dataset, Label, Task};

/// Label statistics for one node, recomputable by a direct scan of its rows.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelStats {
    /// Per-class sample counts; index is the class id.
    Histogram(Vec<u64>),
    /// Count, sum, and sum of squares of the label values.
    Moments { n: u64, sum: f64, sum_sq: f64 },
}

impl LabelStats {
    /// Empty statistics of the shape required by the dataset's task.
    pub fn empty(ds: &Dataset) -> Self {
        match ds.task() {
            Task::Classification => LabelStats::Histogram(vec![0; ds.n_classes()]),
            Task::Regression => LabelStats::Moments {
                n: 0,
                sum: 0.0,
                sum_sq: 0.0,
            },
        }
    }

    pub fn add(&mut self, label: Label) {
        match (self, label) {
            (LabelStats::Histogram(counts), Label::Class(c)) => counts[c as usize] += 1,
            (LabelStats::Moments { n, sum, sum_sq }, Label::Value(y)) => {
                *n += 1;
                *sum += y;
                *sum_sq += y * y;
            }
            _ => panic!("label kind does not match statistics kind"),
        }
    }

    /// Statistics of the complement: `self - left`, used to derive the right
    /// branch from the node total and the scanned prefix.
    pub fn minus(&self, left: &LabelStats) -> LabelStats {
        match (self, left) {
            (LabelStats::Histogram(total), LabelStats::Histogram(l)) => {
                debug_assert_eq!(total.len(), l.len());
                LabelStats::Histogram(total.iter().zip(l.iter()).map(|(t, x)| t - x).collect())
            }
            (
                LabelStats::Moments { n, sum, sum_sq },
                LabelStats::Moments {
                    n: ln,
                    sum: lsum,
                    sum_sq: lsum_sq,
                },
            ) => LabelStats::Moments {
                n: n - ln,
                sum: sum - lsum,
                sum_sq: sum_sq - lsum_sq,
            },
            _ => panic!("mismatched statistics kinds"),
        }
    }

    /// `minus` into a preexisting buffer of the same shape; the split scan
    /// calls this once per candidate boundary, so it must not allocate.
    /// Same arithmetic as [`LabelStats::minus`], value for value.
    pub fn minus_into(&self, left: &LabelStats, out: &mut LabelStats) {
        match (self, left, out) {
            (LabelStats::Histogram(total), LabelStats::Histogram(l), LabelStats::Histogram(o)) => {
                debug_assert_eq!(total.len(), l.len());
                debug_assert_eq!(total.len(), o.len());
                for ((t, x), o) in total.iter().zip(l).zip(o.iter_mut()) {
                    *o = t - x;
                }
            }
            (
                LabelStats::Moments { n, sum, sum_sq },
                LabelStats::Moments {
                    n: ln,
                    sum: lsum,
                    sum_sq: lsum_sq,
                },
                LabelStats::Moments {
                    n: on,
                    sum: osum,
                    sum_sq: osum_sq,
                },
            ) => {
                *on = n - ln;
                *osum = sum - lsum;
                *osum_sq = sum_sq - lsum_sq;
            }
            _ => panic!("mismatched statistics kinds"),
        }
    }

    pub fn count(&self) -> u64 {
        match self {
            LabelStats::Histogram(counts) => counts.iter().sum(),
            LabelStats::Moments { n, .. } => *n,
        }
    }

    /// Majority class, ties resolved toward the lowest class id.
    pub fn majority_class(&self) -> u32 {
        match self {
            LabelStats::Histogram(counts) => {
                let mut best = 0usize;
                for (c, &count) in counts.iter().enumerate() {
                    if count > counts[best] {
                        best = c;
                    }
                }
                best as u32
            }
            LabelStats::Moments { .. } => panic!("majority class of regression statistics"),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            LabelStats::Moments { n, sum, .. } => {
                debug_assert!(*n > 0);
                sum / *n as f64
            }
            LabelStats::Histogram(_) => panic!("mean of classification statistics"),
        }
    }
}
