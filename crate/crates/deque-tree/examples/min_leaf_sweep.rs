//! Show how raising min_leaf_samples trades leaves for speed: on noisy
//! data an unrestricted tree spends most of its time isolating single noisy
//! rows, and a modest leaf-size floor removes that work.
//!
//! ```sh
//! cargo run --release --example min_leaf_sweep
//! ```

use deque_tree::bench::{run_sweep, SweepParam};
use deque_tree::synth;
use deque_tree::{GrowConfig, Task};

fn main() {
    let rows = 100_000;
    let ds = synth::synthetic(rows, 10, 3, Task::Classification);
    println!("synthetic: {rows} rows x 10 features, threshold-rule labels with noise");

    let report = run_sweep(
        &ds,
        &GrowConfig::default(),
        SweepParam::MinLeafSamples,
        &[1, 5, 10, 50, 100],
        3,
    )
    .expect("sweep runs");
    print!("{}", report.text_table());
    println!();
    print!("{}", report.to_csv());
}
