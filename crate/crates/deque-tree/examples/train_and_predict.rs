//! Train on the bundled iris data and predict on the training rows.
//!
//! ```sh
//! cargo run --example train_and_predict
//! ```

use std::path::Path;

use deque_tree::{grow, load_csv, GrowConfig, Label, Prediction, Task};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv");
    let ds = load_csv(&data, None, true, Task::Classification).expect("bundled data loads");
    println!(
        "iris: {} rows, {} features, {} classes",
        ds.n_rows(),
        ds.n_features(),
        ds.n_classes()
    );

    let config = GrowConfig {
        max_depth: 6,
        ..GrowConfig::default()
    };
    let out = grow(&ds, &config).expect("training succeeds");
    println!(
        "grew {} leaves, depth {} (presort {:.3} ms, grow {:.3} ms)",
        out.tree.n_leaves,
        out.tree.depth,
        out.presort_time.as_secs_f64() * 1e3,
        out.grow_time.as_secs_f64() * 1e3,
    );
    println!("counters: {}", out.counters);

    let mut correct = 0usize;
    for row in 0..ds.n_rows() {
        let x: Vec<f32> = (0..ds.n_features()).map(|f| ds.value(f, row)).collect();
        let predicted = out.tree.predict(&x).expect("valid row");
        if let (Prediction::Class(p), Label::Class(y)) = (predicted, ds.label(row)) {
            if p == y {
                correct += 1;
            }
        }
    }
    println!(
        "training accuracy: {:.4}",
        correct as f64 / ds.n_rows() as f64
    );

    let report = out.tree.leaf_report();
    println!("leaf report: {report}");
}
