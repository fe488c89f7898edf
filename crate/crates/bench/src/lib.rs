//! Shared fixtures for the benchmarks.

use densub::datagen::{PAPER_SHAPE_EPS, PAPER_SHAPE_MINPTS};
use densub::{generate, paper_shape_spec, Algorithm, AlgorithmConfig, Dataset, DensityParams};

pub const SEED: u64 = 42;

/// The 6 x 1595 benchmark dataset.
pub fn paper_shape_dataset() -> Dataset {
    generate(&paper_shape_spec(SEED)).expect("paper-shape spec is valid").0
}

/// Default configuration for `algorithm` at the paper-shape density settings.
pub fn paper_shape_config(algorithm: Algorithm) -> AlgorithmConfig {
    let density = DensityParams::new(PAPER_SHAPE_EPS, PAPER_SHAPE_MINPTS).expect("valid density");
    AlgorithmConfig::with_defaults(algorithm, density)
}
