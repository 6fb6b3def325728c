//! Check the deque-based grower against the naive re-sorting oracle on
//! seeded random instances (the same machinery behind `deque-tree verify`).
//!
//! ```sh
//! cargo run --example oracle_check -- 100
//! ```

use deque_tree::oracle::equivalence_trial;

fn main() {
    let trials: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("trial count"))
        .unwrap_or(100);

    for seed in 0..trials {
        match equivalence_trial(seed) {
            Ok(()) => {}
            Err(failure) => {
                eprintln!("seed {seed} diverged: {}", failure.diff);
                eprintln!("config: {:?}", failure.config);
                eprintln!("dataset:\n{}", failure.dataset_csv);
                std::process::exit(3);
            }
        }
        if (seed + 1) % 25 == 0 {
            println!("{} trials ok", seed + 1);
        }
    }
    println!("all {trials} trials: deque grower == naive oracle");
}
