//! Tabular data: loading, subsampling, and the one-time pre-sort.
//!
//! Features are stored column-major as 32-bit floats and are immutable after
//! load; every deque scan downstream walks one column in index order. The
//! pre-sort here is the only place in the whole pipeline where a sort routine
//! runs — everything after it inherits order from these deques.
//!
//! Missing values are not handled internally. The usual trick of imputing
//! them with a number outside the feature's range works unchanged: do it
//! before loading and the exact split search will isolate the imputed block
//! on one side whenever that helps.

use std::fmt;
use std::path::Path;

use crate::counters::InstrumentationCounters;
use crate::deque::{BlockPool, IndexDeque};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Classification,
    Regression,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Classification => write!(f, "classification"),
            Task::Regression => write!(f, "regression"),
        }
    }
}

/// Per-row labels. Classification ids are dense small integers;
/// `n_classes` is inferred as `max id + 1` and preserved by subsampling.
#[derive(Debug, Clone, PartialEq)]
pub enum Labels {
    Classes { ids: Vec<u32>, n_classes: usize },
    Values(Vec<f64>),
}

impl Labels {
    pub fn classes(ids: Vec<u32>) -> Labels {
        let n_classes = ids.iter().max().map_or(0, |&m| m as usize + 1);
        Labels::Classes { ids, n_classes }
    }

    pub fn values(values: Vec<f64>) -> Labels {
        Labels::Values(values)
    }

    fn len(&self) -> usize {
        match self {
            Labels::Classes { ids, .. } => ids.len(),
            Labels::Values(v) => v.len(),
        }
    }
}

/// One label, as handed to statistics accumulators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Label {
    Class(u32),
    Value(f64),
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: empty file")]
    EmptyFile { path: String },
    #[error("{path}: row {row}, column {col}: cannot parse {cell:?} as a number")]
    Parse {
        path: String,
        row: usize,
        col: usize,
        cell: String,
    },
    #[error("{path}: row {row}, column {col}: value {cell:?} is not finite")]
    NonFinite {
        path: String,
        row: usize,
        col: usize,
        cell: String,
    },
    #[error("{path}: row {row}: label {cell:?} is not a non-negative integer class id")]
    BadClassLabel {
        path: String,
        row: usize,
        cell: String,
    },
    #[error("label column {col} out of range: rows have {width} columns")]
    LabelColumnOutOfRange { col: usize, width: usize },
    #[error("{path}: row {row} has {got} columns, expected {want}")]
    RaggedRow {
        path: String,
        row: usize,
        got: usize,
        want: usize,
    },
    #[error("subsample size {m} invalid for dataset with {n_rows} rows")]
    BadSubsample { m: usize, n_rows: usize },
    #[error("columns and labels disagree: {0}")]
    Shape(String),
    #[error("{path}: row {row}: {msg}")]
    Format {
        path: String,
        row: usize,
        msg: String,
    },
}

/// Immutable column-major feature matrix plus labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f32>>,
    labels: Labels,
}

impl Dataset {
    /// Build a dataset from feature columns and labels, validating shape,
    /// finiteness, and classification label range.
    pub fn from_columns(columns: Vec<Vec<f32>>, labels: Labels) -> Result<Dataset, DataError> {
        let n_rows = labels.len();
        for (f, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(DataError::Shape(format!(
                    "column {f} has {} values, labels have {n_rows}",
                    col.len()
                )));
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(DataError::NonFinite {
                    path: "<memory>".into(),
                    row,
                    col: f,
                    cell: col[row].to_string(),
                });
            }
        }
        if let Labels::Classes { ids, n_classes } = &labels {
            debug_assert!(ids.iter().all(|&c| (c as usize) < *n_classes));
        }
        Ok(Dataset { columns, labels })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn task(&self) -> Task {
        match self.labels {
            Labels::Classes { .. } => Task::Classification,
            Labels::Values(_) => Task::Regression,
        }
    }

    pub fn n_classes(&self) -> usize {
        match &self.labels {
            Labels::Classes { n_classes, .. } => *n_classes,
            Labels::Values(_) => 0,
        }
    }

    pub fn value(&self, feature: usize, row: usize) -> f32 {
        self.columns[feature][row]
    }

    pub fn column(&self, feature: usize) -> &[f32] {
        &self.columns[feature]
    }

    pub fn label(&self, row: usize) -> Label {
        match &self.labels {
            Labels::Classes { ids, .. } => Label::Class(ids[row]),
            Labels::Values(v) => Label::Value(v[row]),
        }
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// Draw `m` distinct rows without replacement, preserving relative row
    /// order. Deterministic: selection sampling (Knuth's Algorithm S) driven
    /// by [`SplitMix64`], so a `(m, seed)` pair denotes the same row set on
    /// every platform.
    pub fn subsample(&self, m: usize, seed: u64) -> Result<Dataset, DataError> {
        let n = self.n_rows();
        if m == 0 || m > n {
            return Err(DataError::BadSubsample { m, n_rows: n });
        }
        let mut rng = SplitMix64::new(seed);
        let mut keep = Vec::with_capacity(m);
        let mut selected = 0usize;
        for row in 0..n {
            let remaining_rows = (n - row) as u64;
            let remaining_picks = (m - selected) as u64;
            if remaining_picks == 0 {
                break;
            }
            if rng.next_below(remaining_rows) < remaining_picks {
                keep.push(row);
                selected += 1;
            }
        }
        debug_assert_eq!(keep.len(), m);
        let columns = self
            .columns
            .iter()
            .map(|col| keep.iter().map(|&r| col[r]).collect())
            .collect();
        let labels = match &self.labels {
            Labels::Classes { ids, n_classes } => Labels::Classes {
                ids: keep.iter().map(|&r| ids[r]).collect(),
                n_classes: *n_classes,
            },
            Labels::Values(v) => Labels::Values(keep.iter().map(|&r| v[r]).collect()),
        };
        Dataset::from_columns(columns, labels)
    }
}

/// Per-feature deques of all row indices, each sorted ascending by that
/// feature's values with ties broken by ascending row index.
#[derive(Debug)]
pub struct SortedColumns {
    pub deques: Vec<IndexDeque>,
}

/// Sort every feature once and load the results into deques. This is the
/// only sort in the pipeline; `counters.sort_calls` goes up by one per
/// feature and never again.
pub fn presort(
    ds: &Dataset,
    pool: &mut BlockPool,
    counters: &mut InstrumentationCounters,
) -> SortedColumns {
    let deques = (0..ds.n_features())
        .map(|f| {
            let order = sorted_row_order(ds.column(f), counters);
            let mut dq = IndexDeque::new();
            for row in order {
                dq.push_back(row, pool);
            }
            dq
        })
        .collect();
    SortedColumns { deques }
}

fn sorted_row_order(column: &[f32], counters: &mut InstrumentationCounters) -> Vec<u32> {
    counters.sort_calls += 1;
    let mut order: Vec<u32> = (0..column.len() as u32).collect();
    // Values are validated finite at load, so the comparison is total; the
    // index tiebreak makes it a strict total order and the sort deterministic.
    order.sort_unstable_by(|&a, &b| {
        column[a as usize]
            .partial_cmp(&column[b as usize])
            .expect("finite values")
            .then(a.cmp(&b))
    });
    order
}

/// Read a comma-separated numeric file. `label_col` selects the label column
/// (default: last). Classification labels must be non-negative integers.
pub fn load_csv(
    path: &Path,
    label_col: Option<usize>,
    has_header: bool,
    task: Task,
) -> Result<Dataset, DataError> {
    let display = path.display().to_string();
    let io_err = |source| DataError::Io {
        path: display.clone(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => io_err(source),
            other => DataError::Format {
                path: display.clone(),
                row: 0,
                msg: format!("{other:?}"),
            },
        })?;

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::Format {
            path: display.clone(),
            row: i,
            msg: e.to_string(),
        })?;
        rows.push(record);
    }
    if rows.is_empty() && !has_header {
        return Err(DataError::EmptyFile { path: display });
    }

    let width = if rows.is_empty() {
        // Header-only file: take the width from the header so a zero-row
        // dataset still knows its feature count.
        reader
            .headers()
            .map(|h| h.len())
            .map_err(|e| DataError::Format {
                path: display.clone(),
                row: 0,
                msg: e.to_string(),
            })?
    } else {
        rows[0].len()
    };
    if width < 2 {
        return Err(DataError::Format {
            path: display,
            row: 0,
            msg: format!("need at least 2 columns (features + label), found {width}"),
        });
    }
    let label_col = label_col.unwrap_or(width - 1);
    if label_col >= width {
        return Err(DataError::LabelColumnOutOfRange {
            col: label_col,
            width,
        });
    }

    let n_features = width - 1;
    let mut columns: Vec<Vec<f32>> = vec![Vec::with_capacity(rows.len()); n_features];
    let mut class_ids = Vec::new();
    let mut values = Vec::new();

    for (row_idx, record) in rows.iter().enumerate() {
        if record.len() != width {
            return Err(DataError::RaggedRow {
                path: display.clone(),
                row: row_idx,
                got: record.len(),
                want: width,
            });
        }
        let mut feature = 0usize;
        for (col_idx, cell) in record.iter().enumerate() {
            if col_idx == label_col {
                match task {
                    Task::Classification => {
                        class_ids.push(parse_class_label(cell, &display, row_idx)?)
                    }
                    Task::Regression => {
                        let y: f64 = cell.parse().map_err(|_| DataError::Parse {
                            path: display.clone(),
                            row: row_idx,
                            col: col_idx,
                            cell: cell.to_string(),
                        })?;
                        if !y.is_finite() {
                            return Err(DataError::NonFinite {
                                path: display.clone(),
                                row: row_idx,
                                col: col_idx,
                                cell: cell.to_string(),
                            });
                        }
                        values.push(y);
                    }
                }
            } else {
                columns[feature].push(parse_feature(cell, &display, row_idx, col_idx)?);
                feature += 1;
            }
        }
    }

    let labels = match task {
        Task::Classification => Labels::classes(class_ids),
        Task::Regression => Labels::Values(values),
    };
    Dataset::from_columns(columns, labels)
}

fn parse_feature(cell: &str, path: &str, row: usize, col: usize) -> Result<f32, DataError> {
    let v: f32 = cell.parse().map_err(|_| DataError::Parse {
        path: path.to_string(),
        row,
        col,
        cell: cell.to_string(),
    })?;
    if !v.is_finite() {
        return Err(DataError::NonFinite {
            path: path.to_string(),
            row,
            col,
            cell: cell.to_string(),
        });
    }
    Ok(v)
}

pub(crate) fn parse_class_label(cell: &str, path: &str, row: usize) -> Result<u32, DataError> {
    let as_f64: f64 = cell.parse().map_err(|_| DataError::BadClassLabel {
        path: path.to_string(),
        row,
        cell: cell.to_string(),
    })?;
    if !as_f64.is_finite() || as_f64 < 0.0 || as_f64.fract() != 0.0 || as_f64 > u32::MAX as f64 {
        return Err(DataError::BadClassLabel {
            path: path.to_string(),
            row,
            cell: cell.to_string(),
        });
    }
    Ok(as_f64 as u32)
}

/// Read a libsvm/svmlight text file: `label idx:value idx:value ...` with
/// 1-based feature indices. Features are densified; absent entries are 0.
pub fn load_libsvm(path: &Path, task: Task) -> Result<Dataset, DataError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let mut raw: Vec<(String, Vec<(usize, f32)>)> = Vec::new();
    let mut max_index = 0usize;
    for (row_idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("nonempty line");
        let mut entries = Vec::new();
        for tok in tokens {
            let (idx_str, val_str) = tok.split_once(':').ok_or_else(|| DataError::Format {
                path: display.clone(),
                row: row_idx,
                msg: format!("expected index:value pair, found {tok:?}"),
            })?;
            let idx: usize = idx_str.parse().map_err(|_| DataError::Format {
                path: display.clone(),
                row: row_idx,
                msg: format!("bad feature index {idx_str:?}"),
            })?;
            if idx == 0 {
                return Err(DataError::Format {
                    path: display.clone(),
                    row: row_idx,
                    msg: "feature indices are 1-based".into(),
                });
            }
            let val = parse_feature(val_str, &display, row_idx, idx)?;
            max_index = max_index.max(idx);
            entries.push((idx - 1, val));
        }
        raw.push((label_tok.to_string(), entries));
    }
    if raw.is_empty() {
        return Err(DataError::EmptyFile { path: display });
    }

    let n_rows = raw.len();
    let mut columns = vec![vec![0.0f32; n_rows]; max_index];
    let mut class_ids = Vec::new();
    let mut values = Vec::new();
    for (row, (label_tok, entries)) in raw.iter().enumerate() {
        match task {
            Task::Classification => class_ids.push(parse_class_label(label_tok, &display, row)?),
            Task::Regression => {
                let y: f64 = label_tok.parse().map_err(|_| DataError::Parse {
                    path: display.clone(),
                    row,
                    col: 0,
                    cell: label_tok.clone(),
                })?;
                values.push(y);
            }
        }
        for &(feature, val) in entries {
            columns[feature][row] = val;
        }
    }
    let labels = match task {
        Task::Classification => Labels::classes(class_ids),
        Task::Regression => Labels::Values(values),
    };
    Dataset::from_columns(columns, labels)
}
