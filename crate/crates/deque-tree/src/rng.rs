//! Minimal portable pseudo-random generator used for subsampling and the
//! synthetic data generators.
//!
//! Reproducibility across runs, platforms, and reimplementations in other
//! languages is a hard requirement for the benchmark and verification
//! commands, so instead of an external generator whose stream may change
//! between library versions we pin SplitMix64. The full update rule is:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! (Steele, Lea, Flood, "Fast splittable pseudorandom number generators".)

/// SplitMix64 generator. Copy of the state is cheap; streams are identical
/// for identical seeds on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, bound)`. `bound` must be nonzero.
    ///
    /// Plain modulo reduction; the bias is below 2^-40 for the bounds used
    /// in this crate (at most a few million) and keeps the stream trivially
    /// reproducible in other languages.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Uniform f64 in `[0, 1)` built from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
