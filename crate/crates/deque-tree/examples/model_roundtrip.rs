//! Save a trained model to the versioned text format and load it back.
//!
//! ```sh
//! cargo run --example model_roundtrip
//! ```

use deque_tree::synth;
use deque_tree::{grow, Criterion, GrowConfig, ModelFile, Task};

fn main() {
    let ds = synth::synthetic(2000, 4, 11, Task::Regression);
    let config = GrowConfig {
        max_depth: 5,
        min_leaf_samples: 10,
        max_leaves: None,
        criterion: Criterion::Variance,
    };
    let out = grow(&ds, &config).expect("training succeeds");
    let model = ModelFile::new(out.tree, config);

    let dir = std::env::temp_dir();
    let path = dir.join("deque-tree-example.model");
    model.save(&path).expect("model writes");
    println!("wrote {}", path.display());

    let text = std::fs::read_to_string(&path).unwrap();
    println!("--- first lines of the file ---");
    for line in text.lines().take(12) {
        println!("{line}");
    }
    println!("--- ({} lines total) ---", text.lines().count());

    let back = ModelFile::load(&path).expect("model loads");
    let mut checked = 0usize;
    for row in 0..ds.n_rows() {
        let x: Vec<f32> = (0..ds.n_features()).map(|f| ds.value(f, row)).collect();
        assert_eq!(
            model.tree.predict(&x).unwrap(),
            back.tree.predict(&x).unwrap(),
            "round trip must be exact"
        );
        checked += 1;
    }
    println!("loaded model agrees on all {checked} training rows, bit for bit");
}
