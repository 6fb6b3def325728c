//! Sweep harness: one tree per (parameter value, repeat), timed.
//!
//! Grow time excludes the pre-sort, which is timed and reported separately;
//! data loading is outside the harness entirely. Repeats run sequentially
//! in-process and the reported grow time is mean/stddev over them.

use std::fmt::Write as _;
use std::time::Duration;

use crate::counters::InstrumentationCounters;
use crate::dataset::Dataset;
use crate::grow::{grow, GrowConfig, GrowError};

/// Which growth control the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    MaxDepth,
    MinLeafSamples,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::MaxDepth => "max_depth",
            SweepParam::MinLeafSamples => "min_leaf_samples",
        }
    }
}

/// One sweep value's measurements.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub value: usize,
    pub n_leaves: usize,
    pub depth: usize,
    pub grow_mean: Duration,
    pub grow_std: Duration,
    pub presort_mean: Duration,
    pub counters: InstrumentationCounters,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub param: SweepParam,
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
}

/// Run `repeats` grows per sweep value. Each grow gets a fresh pre-sort
/// (the grower consumes the root deques), timed separately.
pub fn run_sweep(
    ds: &Dataset,
    base: &GrowConfig,
    param: SweepParam,
    values: &[usize],
    repeats: usize,
) -> Result<BenchReport, GrowError> {
    assert!(repeats >= 1, "need at least one repeat");
    assert!(!values.is_empty(), "empty sweep list");
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut config = base.clone();
        match param {
            SweepParam::MaxDepth => config.max_depth = value,
            SweepParam::MinLeafSamples => config.min_leaf_samples = value,
        }
        let mut grow_times = Vec::with_capacity(repeats);
        let mut presort_times = Vec::with_capacity(repeats);
        let mut last = None;
        for _ in 0..repeats {
            let out = grow(ds, &config)?;
            grow_times.push(out.grow_time);
            presort_times.push(out.presort_time);
            last = Some(out);
        }
        let out = last.expect("at least one repeat");
        let (grow_mean, grow_std) = mean_std(&grow_times);
        let (presort_mean, _) = mean_std(&presort_times);
        rows.push(BenchRow {
            value,
            n_leaves: out.tree.n_leaves,
            depth: out.tree.depth,
            grow_mean,
            grow_std,
            presort_mean,
            counters: out.counters,
        });
    }
    Ok(BenchReport {
        param,
        repeats,
        rows,
    })
}

fn mean_std(times: &[Duration]) -> (Duration, Duration) {
    let n = times.len() as f64;
    let mean = times.iter().map(Duration::as_secs_f64).sum::<f64>() / n;
    let var = times
        .iter()
        .map(|t| {
            let d = t.as_secs_f64() - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    (
        Duration::from_secs_f64(mean),
        Duration::from_secs_f64(var.sqrt()),
    )
}

impl BenchReport {
    /// Aligned table mirroring the usual sweep layout: parameter, leaf
    /// count, seconds.
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:>16} {:>10} {:>6} {:>12} {:>12} {:>12}",
            self.param.name(),
            "# leaf",
            "depth",
            "grow mean s",
            "grow std s",
            "presort s"
        )
        .unwrap();
        for row in &self.rows {
            writeln!(
                out,
                "{:>16} {:>10} {:>6} {:>12.6} {:>12.6} {:>12.6}",
                row.value,
                row.n_leaves,
                row.depth,
                row.grow_mean.as_secs_f64(),
                row.grow_std.as_secs_f64(),
                row.presort_mean.as_secs_f64()
            )
            .unwrap();
        }
        writeln!(out, "({} repeats per value)", self.repeats).unwrap();
        out
    }

    /// CSV rendering with the fixed header
    /// `param,n_leaves,depth,grow_mean_s,grow_std_s,presort_s,boundary_evals,element_moves,sort_calls`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "param,n_leaves,depth,grow_mean_s,grow_std_s,presort_s,boundary_evals,element_moves,sort_calls\n",
        );
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.9},{:.9},{:.9},{},{},{}",
                row.value,
                row.n_leaves,
                row.depth,
                row.grow_mean.as_secs_f64(),
                row.grow_std.as_secs_f64(),
                row.presort_mean.as_secs_f64(),
                row.counters.boundary_evals,
                row.counters.element_moves,
                row.counters.sort_calls
            )
            .unwrap();
        }
        out
    }
}
