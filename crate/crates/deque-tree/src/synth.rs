//! Deterministic synthetic datasets.
//!
//! `synthetic` builds benchmark-scale data: uniform features and labels from
//! a two-feature threshold rule with a little label noise, so trees keep
//! finding positive-gain splits well past the rule depth (like real tabular
//! data does) instead of going pure immediately.
//!
//! `random_instance` builds small verification instances: grid-valued
//! features with plenty of duplicate values (ties are where split-search
//! bugs live) and a config drawn from the depth/leaf/criterion grid. Labels
//! are integer-valued even for regression, which keeps every statistic
//! exact in double precision, so the deque grower and the naive oracle must
//! agree bit for bit, ties included.

use crate::dataset::{Dataset, Labels, Task};
use crate::grow::GrowConfig;
use crate::rng::SplitMix64;
use crate::split::Criterion;

/// Uniform features, threshold-rule labels with 10% label noise.
/// Deterministic in `(n_rows, n_features, seed, task)`.
pub fn synthetic(n_rows: usize, n_features: usize, seed: u64, task: Task) -> Dataset {
    synthetic_with_noise(n_rows, n_features, seed, task, 10)
}

/// `synthetic` with an explicit noise level in percent. Noise keeps trees
/// splitting well past the rule depth (benchmark-like behavior); noise 0
/// gives rule-pure labels, under which growth stops at purity and leaf
/// counts shrink monotonically as `min_leaf_samples` rises.
pub fn synthetic_with_noise(
    n_rows: usize,
    n_features: usize,
    seed: u64,
    task: Task,
    noise_percent: u8,
) -> Dataset {
    assert!(n_features >= 1, "need at least one feature");
    assert!(noise_percent <= 100);
    let mut rng = SplitMix64::new(seed);
    let columns: Vec<Vec<f32>> = (0..n_features)
        .map(|_| (0..n_rows).map(|_| rng.next_f64() as f32).collect())
        .collect();
    let rule_a = rng.next_below(n_features as u64) as usize;
    let rule_b = rng.next_below(n_features as u64) as usize;
    let rule_c = rng.next_below(n_features as u64) as usize;
    let cut_a = (0.2 + 0.6 * rng.next_f64()) as f32;
    let cut_b = (0.2 + 0.6 * rng.next_f64()) as f32;
    let cut_c = (0.2 + 0.6 * rng.next_f64()) as f32;
    // Depth-2 decision rule over up to three features.
    let rule = |row: usize, columns: &[Vec<f32>]| -> u32 {
        if columns[rule_a][row] <= cut_a {
            u32::from(columns[rule_b][row] <= cut_b)
        } else {
            u32::from(columns[rule_c][row] > cut_c)
        }
    };

    let labels = match task {
        Task::Classification => {
            let ids = (0..n_rows)
                .map(|row| {
                    let label = rule(row, &columns);
                    if noise_percent > 0 && rng.next_below(100) < noise_percent as u64 {
                        rng.next_below(2) as u32
                    } else {
                        label
                    }
                })
                .collect();
            Labels::classes(ids)
        }
        Task::Regression => {
            let values = (0..n_rows)
                .map(|row| {
                    let base = 2.0 * f64::from(rule(row, &columns));
                    if noise_percent > 0 {
                        base + rng.next_f64() * f64::from(noise_percent) / 20.0
                    } else {
                        base
                    }
                })
                .collect();
            Labels::values(values)
        }
    };
    Dataset::from_columns(columns, labels).expect("generated data is valid")
}

/// Striped data: feature 0 is cut into stripes of mixed widths (down to a
/// handful of samples) and the label is the stripe parity; remaining
/// features are uninformative. Labels are exact, so a tree grows until
/// every stripe it can afford is isolated — raising `min_leaf_samples`
/// removes the narrow stripes from reach and the leaf count falls.
pub fn striped(
    n_rows: usize,
    n_features: usize,
    n_stripes: usize,
    seed: u64,
    task: Task,
) -> Dataset {
    assert!(n_features >= 1 && n_stripes >= 2);
    let mut rng = SplitMix64::new(seed);
    let mut boundaries: Vec<f64> = Vec::with_capacity(n_stripes - 1);
    for _ in 0..(n_stripes - 1) / 2 {
        let at = rng.next_f64();
        boundaries.push(at);
        // A twin boundary right next to it makes a narrow stripe.
        let width = 1e-4 + rng.next_f64() * 2e-2;
        boundaries.push((at + width).min(1.0));
    }
    while boundaries.len() < n_stripes - 1 {
        boundaries.push(rng.next_f64());
    }
    boundaries.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let columns: Vec<Vec<f32>> = (0..n_features)
        .map(|_| (0..n_rows).map(|_| rng.next_f64() as f32).collect())
        .collect();
    let stripe_of = |x: f32| -> usize { boundaries.partition_point(|&b| b < f64::from(x)) };
    let labels = match task {
        Task::Classification => Labels::classes(
            (0..n_rows)
                .map(|row| (stripe_of(columns[0][row]) % 2) as u32)
                .collect(),
        ),
        Task::Regression => Labels::values(
            (0..n_rows)
                .map(|row| (stripe_of(columns[0][row]) % 2) as f64 * 2.0)
                .collect(),
        ),
    };
    Dataset::from_columns(columns, labels).expect("generated data is valid")
}

/// One verification instance: a small dataset full of tied feature values
/// plus a growth config from the standard grid.
pub fn random_instance(seed: u64) -> (Dataset, GrowConfig) {
    random_instance_capped(seed, 200, 5)
}

/// `random_instance` with explicit caps on rows and features.
pub fn random_instance_capped(
    seed: u64,
    max_rows: usize,
    max_features: usize,
) -> (Dataset, GrowConfig) {
    assert!(max_rows >= 1 && max_features >= 1);
    let mut rng = SplitMix64::new(seed);
    let columns = tied_columns(&mut rng, max_rows, max_features);

    let criterion = match rng.next_below(3) {
        0 => Criterion::Gini,
        1 => Criterion::Entropy,
        _ => Criterion::Variance,
    };
    let depth_grid = [1usize, 2, 4, 8];
    let leaf_grid = [1usize, 2, 5];
    let config = GrowConfig {
        max_depth: depth_grid[rng.next_below(4) as usize],
        min_leaf_samples: leaf_grid[rng.next_below(3) as usize],
        max_leaves: None,
        criterion,
    };

    let labels = tied_labels(&mut rng, &columns, criterion);
    let ds = Dataset::from_columns(columns, labels).expect("generated data is valid");
    (ds, config)
}

/// A verification instance for one specific configuration (used to sweep
/// the full depth/leaf/criterion cross deterministically).
pub fn instance_for_config(
    seed: u64,
    max_rows: usize,
    max_features: usize,
    config: &GrowConfig,
) -> Dataset {
    assert!(max_rows >= 1 && max_features >= 1);
    let mut rng = SplitMix64::new(seed);
    let columns = tied_columns(&mut rng, max_rows, max_features);
    let labels = tied_labels(&mut rng, &columns, config.criterion);
    Dataset::from_columns(columns, labels).expect("generated data is valid")
}

fn tied_columns(rng: &mut SplitMix64, max_rows: usize, max_features: usize) -> Vec<Vec<f32>> {
    let n = 1 + rng.next_below(max_rows as u64) as usize;
    let k = 1 + rng.next_below(max_features as u64) as usize;
    (0..k)
        .map(|_| {
            // Few distinct levels per feature forces duplicate values.
            let levels = 2 + rng.next_below((n as u64 / 3).max(2));
            (0..n)
                .map(|_| ((rng.next_below(levels) as i64 - (levels / 2) as i64) as f32) * 0.25)
                .collect()
        })
        .collect()
}

fn tied_labels(rng: &mut SplitMix64, columns: &[Vec<f32>], criterion: Criterion) -> Labels {
    let n = columns[0].len();
    let k = columns.len();
    let rule_feature = rng.next_below(k as u64) as usize;
    let rule_cut = (rng.next_below(8) as f32 - 4.0) * 0.25;
    match criterion {
        Criterion::Variance => {
            // Integer-valued targets: sums and sums of squares stay exact.
            let values = (0..n)
                .map(|row| {
                    let rule = 2.0 * f64::from(u8::from(columns[rule_feature][row] <= rule_cut));
                    rule + rng.next_below(3) as f64
                })
                .collect();
            Labels::values(values)
        }
        _ => {
            let n_classes = 2 + rng.next_below(2) as u32;
            let ids = (0..n)
                .map(|row| {
                    let rule = u32::from(columns[rule_feature][row] <= rule_cut);
                    if rng.next_below(7) == 0 {
                        rng.next_below(n_classes as u64) as u32
                    } else {
                        rule.min(n_classes - 1)
                    }
                })
                .collect();
            Labels::classes(ids)
        }
    }
}

/// Fraction of feature cells whose value occurs more than once in its
/// column. Used to check that verification instances really are tie-heavy.
pub fn duplicate_value_fraction(ds: &Dataset) -> f64 {
    let mut duplicated = 0usize;
    let mut total = 0usize;
    for f in 0..ds.n_features() {
        let mut counts = std::collections::HashMap::new();
        for &v in ds.column(f) {
            *counts.entry(v.to_bits()).or_insert(0usize) += 1;
        }
        for &v in ds.column(f) {
            total += 1;
            if counts[&v.to_bits()] > 1 {
                duplicated += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        duplicated as f64 / total as f64
    }
}
