//! Datasets, generators, quantization and seeded randomness.

pub mod dataset;
pub mod generators;
pub mod idx;
pub mod quantize;
pub mod rng;
pub mod spec;

pub use dataset::{Dataset, Sample, Task};
pub use generators::{
    class_means, correlated_covariance, correlated_eigenvalues, gen_correlated,
    empirical_feature_variance, gen_gaussian_means, gen_linsep, gen_regression, regression_target,
    LinsepStats,
};
pub use idx::load_idx_images;
pub use quantize::{approx_error_bound, approx_qubits_needed, quantize};
pub use rng::{derive_seed, Rng, Stream};
pub use spec::{DatasetKind, DatasetSpec};
