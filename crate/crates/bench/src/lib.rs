//! Shared fixtures for the kernel benchmarks.

use nmf_rlct_core::bayes::{generate_dataset, Dataset};
use nmf_rlct_core::divergence::Family;
use nmf_rlct_core::model::TrueStructure;

/// The (2,2,1,1) Gaussian reference configuration used across benches.
pub fn reference_truth() -> TrueStructure {
    TrueStructure::ones(2, 2, 1).expect("static fixture")
}

/// A reproducible dataset on the reference configuration.
pub fn reference_dataset(n: usize) -> Dataset {
    generate_dataset(Family::Gaussian, &reference_truth(), 2, 2, n, 12345)
        .expect("static fixture")
}
