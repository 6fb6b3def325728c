//! Time tree construction across max_depth values on synthetic data, in the
//! style of a benchmark table (pre-sort excluded from the grow time).
//!
//! ```sh
//! cargo run --release --example depth_sweep
//! ```

use deque_tree::bench::{run_sweep, SweepParam};
use deque_tree::synth;
use deque_tree::{GrowConfig, Task};

fn main() {
    let rows = 200_000;
    let ds = synth::synthetic(rows, 10, 3, Task::Classification);
    println!("synthetic: {rows} rows x 10 features, threshold-rule labels with noise");

    let report = run_sweep(
        &ds,
        &GrowConfig::default(),
        SweepParam::MaxDepth,
        &[2, 4, 8, 16],
        3,
    )
    .expect("sweep runs");
    print!("{}", report.text_table());
}
