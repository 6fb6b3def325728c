//! Command-line surface: `train`, `predict`, `verify`, and `bench`.
//!
//! The binary in `src/main.rs` is a thin wrapper over [`run_from_env`];
//! every command is an ordinary library function so integration tests can
//! drive them in-process. Exit codes: 0 success, 1 usage error, 2 data
//! error, 3 verification failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_sweep, SweepParam};
use crate::dataset::{load_csv, load_libsvm, DataError, Dataset, Label, Task};
use crate::grow::{grow, GrowConfig, GrowError};
use crate::model::{ModelError, ModelFile};
use crate::split::Criterion;
use crate::synth;
use crate::tree::{PredictError, Prediction};

#[derive(Debug, Parser)]
#[command(
    name = "deque-tree",
    version,
    about = "Exact greedy decision trees over pre-sorted index deques"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a tree and write a model file.
    Train(TrainArgs),
    /// Predict with a saved model; prints one prediction per row.
    Predict(PredictArgs),
    /// Property-check the grower against the naive re-sorting oracle.
    Verify(VerifyArgs),
    /// Sweep a growth control and report timings and counters.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Csv,
    Libsvm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Classification,
    Regression,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Task {
        match t {
            TaskArg::Classification => Task::Classification,
            TaskArg::Regression => Task::Regression,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Gini,
    Entropy,
    Variance,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Criterion {
        match c {
            CriterionArg::Gini => Criterion::Gini,
            CriterionArg::Entropy => Criterion::Entropy,
            CriterionArg::Variance => Criterion::Variance,
        }
    }
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Input data path.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    format: DataFormat,
    /// Label column index for CSV input (default: last column).
    #[arg(long)]
    label_col: Option<usize>,
    /// Skip one CSV header line.
    #[arg(long)]
    has_header: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    input: DataArgs,
    #[arg(long, value_enum, default_value_t = TaskArg::Classification)]
    task: TaskArg,
    /// Split criterion (default: gini for classification, variance for
    /// regression).
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
    #[arg(long, default_value_t = 1)]
    min_leaf_samples: usize,
    /// Optional cap on the finished leaf count (best-gain leaves win).
    #[arg(long)]
    max_leaves: Option<usize>,
    /// Train on this many rows drawn without replacement.
    #[arg(long)]
    subsample: Option<usize>,
    /// Seed for the subsample draw.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Where to write the model file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PredictArgs {
    /// Model file written by `train`.
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    input: DataArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Cap on rows per generated instance.
    #[arg(long, default_value_t = 200)]
    max_rows: usize,
    /// Cap on features per generated instance.
    #[arg(long, default_value_t = 5)]
    max_features: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepArg {
    MaxDepth,
    MinLeafSamples,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Data file to sweep on (alternative: --synthetic).
    #[arg(long, conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    format: DataFormat,
    #[arg(long)]
    label_col: Option<usize>,
    #[arg(long)]
    has_header: bool,
    /// Self-contained data: `rows,features,seed` (uniform features,
    /// threshold-rule labels with noise).
    #[arg(long, value_name = "N,K,SEED")]
    synthetic: Option<String>,
    #[arg(long, value_enum, default_value_t = TaskArg::Classification)]
    task: TaskArg,
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    sweep: SweepArg,
    /// Comma-separated sweep values, e.g. `2,4,8,16`.
    #[arg(long)]
    values: String,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Fixed depth cap while sweeping min-leaf-samples.
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
    /// Fixed leaf size while sweeping max-depth.
    #[arg(long, default_value_t = 1)]
    min_leaf_samples: usize,
    /// Write the CSV report here instead of printing it after the table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("verification failed")]
    VerifyFailed,
}

impl From<GrowError> for CliError {
    fn from(e: GrowError) -> CliError {
        match e {
            GrowError::InvalidConfig(_) | GrowError::CriterionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            GrowError::EmptyDataset | GrowError::NoFeatures => {
                CliError::Data(DataError::Shape(e.to_string()))
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::VerifyFailed => 3,
            _ => 2,
        }
    }
}

/// Parse `std::env::args` and run. Returns the process exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn load_dataset(input: &DataArgs, task: Task) -> Result<Dataset, CliError> {
    let ds = match input.format {
        DataFormat::Csv => load_csv(&input.data, input.label_col, input.has_header, task)?,
        DataFormat::Libsvm => load_libsvm(&input.data, task)?,
    };
    Ok(ds)
}

fn default_criterion(task: Task) -> Criterion {
    match task {
        Task::Classification => Criterion::Gini,
        Task::Regression => Criterion::Variance,
    }
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    let task = Task::from(args.task);
    let mut ds = load_dataset(&args.input, task)?;
    if let Some(m) = args.subsample {
        ds = ds.subsample(m, args.seed)?;
    }
    let config = GrowConfig {
        max_depth: args.max_depth,
        min_leaf_samples: args.min_leaf_samples,
        max_leaves: args.max_leaves,
        criterion: args
            .criterion
            .map(Criterion::from)
            .unwrap_or_else(|| default_criterion(task)),
    };
    let out = grow(&ds, &config)?;
    let model = ModelFile::new(out.tree, config);
    model.save(&args.out)?;

    println!(
        "trained on {} rows x {} features ({task})",
        ds.n_rows(),
        ds.n_features()
    );
    println!(
        "n_leaves {}  depth {}",
        model.tree.n_leaves, model.tree.depth
    );
    println!(
        "presort {:.6} s  grow {:.6} s",
        out.presort_time.as_secs_f64(),
        out.grow_time.as_secs_f64()
    );
    println!("counters: {}", out.counters);
    println!("model written to {}", args.out.display());
    Ok(())
}

/// Rows parsed for prediction: features, and labels when the file has a
/// label column beyond the model's feature count.
struct PredictInput {
    rows: Vec<Vec<f32>>,
    labels: Option<Vec<Label>>,
}

fn read_predict_input(
    input: &DataArgs,
    n_features: usize,
    task: Task,
) -> Result<PredictInput, CliError> {
    match input.format {
        DataFormat::Libsvm => {
            let ds = load_libsvm(&input.data, task)?;
            if ds.n_features() > n_features {
                return Err(DataError::Shape(format!(
                    "data has {} features, model expects {n_features}",
                    ds.n_features()
                ))
                .into());
            }
            let rows = (0..ds.n_rows())
                .map(|r| {
                    let mut row: Vec<f32> = (0..ds.n_features()).map(|f| ds.value(f, r)).collect();
                    row.resize(n_features, 0.0);
                    row
                })
                .collect();
            let labels = Some((0..ds.n_rows()).map(|r| ds.label(r)).collect());
            Ok(PredictInput { rows, labels })
        }
        DataFormat::Csv => {
            let display = input.data.display().to_string();
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(input.has_header)
                .trim(csv::Trim::All)
                .from_path(&input.data)
                .map_err(|e| {
                    CliError::Data(DataError::Format {
                        path: display.clone(),
                        row: 0,
                        msg: e.to_string(),
                    })
                })?;
            let mut rows = Vec::new();
            let mut label_cells: Vec<String> = Vec::new();
            let mut width: Option<usize> = None;
            for (row_idx, record) in reader.records().enumerate() {
                let record = record.map_err(|e| {
                    CliError::Data(DataError::Format {
                        path: display.clone(),
                        row: row_idx,
                        msg: e.to_string(),
                    })
                })?;
                let w = *width.get_or_insert(record.len());
                if record.len() != w {
                    return Err(DataError::RaggedRow {
                        path: display.clone(),
                        row: row_idx,
                        got: record.len(),
                        want: w,
                    }
                    .into());
                }
                let label_col = if w == n_features {
                    None
                } else if w == n_features + 1 {
                    Some(input.label_col.unwrap_or(w - 1))
                } else {
                    return Err(DataError::Shape(format!(
                        "{display}: rows have {w} columns, model expects {n_features} features (+ optional label)"
                    ))
                    .into());
                };
                let mut row = Vec::with_capacity(n_features);
                for (col_idx, cell) in record.iter().enumerate() {
                    if Some(col_idx) == label_col {
                        label_cells.push(cell.to_string());
                        continue;
                    }
                    let v: f32 = cell.parse().map_err(|_| DataError::Parse {
                        path: display.clone(),
                        row: row_idx,
                        col: col_idx,
                        cell: cell.to_string(),
                    })?;
                    row.push(v);
                }
                rows.push(row);
            }
            let labels = if label_cells.is_empty() {
                None
            } else {
                let mut labels = Vec::with_capacity(label_cells.len());
                for (row_idx, cell) in label_cells.iter().enumerate() {
                    let label = match task {
                        Task::Classification => Label::Class(
                            crate::dataset::parse_class_label(cell, &display, row_idx)?,
                        ),
                        Task::Regression => {
                            let y: f64 = cell.parse().map_err(|_| DataError::Parse {
                                path: display.clone(),
                                row: row_idx,
                                col: usize::MAX,
                                cell: cell.clone(),
                            })?;
                            Label::Value(y)
                        }
                    };
                    labels.push(label);
                }
                Some(labels)
            };
            Ok(PredictInput { rows, labels })
        }
    }
}

fn cmd_predict(args: PredictArgs) -> Result<(), CliError> {
    let model = ModelFile::load(&args.model)?;
    let input = read_predict_input(&args.input, model.tree.n_features, model.tree.task)?;

    let mut predictions = Vec::with_capacity(input.rows.len());
    for row in &input.rows {
        predictions.push(model.tree.predict(row)?);
    }
    for p in &predictions {
        println!("{p}");
    }

    if let Some(labels) = &input.labels {
        match model.tree.task {
            Task::Classification => {
                let correct = predictions
                    .iter()
                    .zip(labels)
                    .filter(|(p, l)| matches!((p, l), (Prediction::Class(a), Label::Class(b)) if a == b))
                    .count();
                let n = predictions.len().max(1);
                eprintln!("accuracy {:.6}", correct as f64 / n as f64);
            }
            Task::Regression => {
                let mut sq = 0.0f64;
                for (p, l) in predictions.iter().zip(labels) {
                    if let (Prediction::Value(a), Label::Value(b)) = (p, l) {
                        sq += (a - b) * (a - b);
                    }
                }
                let n = predictions.len().max(1);
                eprintln!("mse {:.6}", sq / n as f64);
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        eprintln!("warning: 0 trials requested; passing vacuously");
        println!("verify: 0 trials, vacuous pass");
        return Ok(());
    }
    for i in 0..args.trials {
        let seed = args.seed.wrapping_add(i);
        let trial = crate::oracle::equivalence_trial_capped(seed, args.max_rows, args.max_features);
        if let Err(failure) = trial {
            println!("verify: FAIL at trial {i} (seed {seed})");
            println!("first difference: {}", failure.diff);
            println!("config: {:?}", failure.config);
            println!("--- dataset (features..., label) ---");
            print!("{}", failure.dataset_csv);
            println!("--- deque-based tree ---");
            print!("{}", failure.fast);
            println!("--- naive oracle tree ---");
            print!("{}", failure.naive);
            return Err(CliError::VerifyFailed);
        }
    }
    println!(
        "verify: {} trials passed (seed {}, max_rows {}, max_features {})",
        args.trials, args.seed, args.max_rows, args.max_features
    );
    Ok(())
}

fn parse_synthetic_spec(spec: &str) -> Result<(usize, usize, u64), CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--synthetic expects `rows,features,seed`, found {spec:?}"
        )));
    }
    let parse = |s: &str, what: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("--synthetic: bad {what} {s:?}")))
    };
    Ok((
        parse(parts[0], "row count")? as usize,
        parse(parts[1], "feature count")? as usize,
        parse(parts[2], "seed")?,
    ))
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let values = parse_values(&args.values)?;
    let task = Task::from(args.task);
    let ds = match (&args.data, &args.synthetic) {
        (Some(path), None) => {
            let input = DataArgs {
                data: path.clone(),
                format: args.format,
                label_col: args.label_col,
                has_header: args.has_header,
            };
            load_dataset(&input, task)?
        }
        (None, Some(spec)) => {
            let (n, k, seed) = parse_synthetic_spec(spec)?;
            if n == 0 || k == 0 {
                return Err(CliError::Usage(
                    "--synthetic needs at least 1 row and 1 feature".into(),
                ));
            }
            synth::synthetic(n, k, seed, task)
        }
        _ => {
            return Err(CliError::Usage(
                "bench needs exactly one of --data or --synthetic".into(),
            ))
        }
    };

    let base = GrowConfig {
        max_depth: args.max_depth,
        min_leaf_samples: args.min_leaf_samples,
        max_leaves: None,
        criterion: args
            .criterion
            .map(Criterion::from)
            .unwrap_or_else(|| default_criterion(task)),
    };
    let param = match args.sweep {
        SweepArg::MaxDepth => SweepParam::MaxDepth,
        SweepArg::MinLeafSamples => SweepParam::MinLeafSamples,
    };
    let report =
        run_sweep(&ds, &base, param, &values, args.repeats.max(1)).map_err(CliError::from)?;

    print!("{}", report.text_table());
    match &args.csv {
        Some(path) => {
            std::fs::write(path, report.to_csv()).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            println!("csv written to {}", path.display());
        }
        None => {
            println!();
            print!("{}", report.to_csv());
        }
    }
    Ok(())
}

fn parse_values(list: &str) -> Result<Vec<usize>, CliError> {
    let values: Result<Vec<usize>, _> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect();
    let values = values.map_err(|_| CliError::Usage(format!("bad --values list {list:?}")))?;
    if values.is_empty() {
        return Err(CliError::Usage("empty --values list".into()));
    }
    Ok(values)
}

/// Used by `main.rs`; kept here so the binary stays a one-liner.
pub fn main_entry() -> i32 {
    run_from_env()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_list_parses() {
        assert_eq!(parse_values("2,4,8").unwrap(), vec![2, 4, 8]);
        assert_eq!(parse_values(" 1, 5 ,10 ").unwrap(), vec![1, 5, 10]);
        assert!(parse_values("").is_err());
        assert!(parse_values("2,x").is_err());
    }

    #[test]
    fn synthetic_spec_parses() {
        assert_eq!(parse_synthetic_spec("100,5,7").unwrap(), (100, 5, 7));
        assert!(parse_synthetic_spec("100,5").is_err());
        assert!(parse_synthetic_spec("a,b,c").is_err());
    }

    #[test]
    fn grow_error_exit_codes() {
        let usage: CliError = GrowError::InvalidConfig("x".into()).into();
        assert_eq!(usage.exit_code(), 1);
        let data: CliError = GrowError::EmptyDataset.into();
        assert_eq!(data.exit_code(), 2);
        assert_eq!(CliError::VerifyFailed.exit_code(), 3);
    }
}
