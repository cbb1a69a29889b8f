//! Synthetic datasets. Classification sets alternate labels (even index is
//! class 0, odd index is class 1), so every prefix of even length is balanced.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::dataset::{Dataset, Sample, Task};
use super::rng::Rng;
use crate::error::{domain, Result};

pub const DEFAULT_SIGMA2: f64 = 0.8;
pub const DEFAULT_MARGIN: f64 = 0.3;
pub const CORRELATED_VARIANCE: f64 = 0.8;
pub const CORRELATED_COVARIANCE: f64 = 0.792;

fn check_balanced(dim: usize, size: usize) -> Result<()> {
    if dim == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    if size % 2 != 0 {
        return Err(domain(format!("balanced datasets need an even size, got {size}")));
    }
    Ok(())
}

/// Class means `μ_d = (2π/16)(d mod 8)` for class 0 and `(2π/16)(8 + d mod 8)`
/// for class 1, reduced into `[0, 2π)`.
pub fn class_means(dim: usize, class: usize) -> Vec<f64> {
    (0..dim)
        .map(|d| (TAU / 16.0 * (8 * class + d % 8) as f64).rem_euclid(TAU))
        .collect()
}

pub fn gen_gaussian_means(dim: usize, size: usize, sigma2: f64, seed: u64) -> Result<Dataset> {
    check_balanced(dim, size)?;
    if !(sigma2 >= 0.0) {
        return Err(domain(format!("variance must be nonnegative, got {sigma2}")));
    }
    let means = [class_means(dim, 0), class_means(dim, 1)];
    let mut rng = Rng::new(seed);
    let samples = (0..size)
        .map(|i| {
            let class = i % 2;
            let features = means[class].iter().map(|&m| rng.normal(m, sigma2)).collect();
            Sample {
                features,
                label: class as f64,
            }
        })
        .collect();
    Dataset::new(Task::Classification, dim, samples)
}

/// Rejection counts from [`gen_linsep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinsepStats {
    pub draws: u64,
    pub accepted: u64,
}

impl LinsepStats {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.draws as f64
    }
}

/// Uniform points on `[−π/2, π/2]^D` kept when `Σx > margin·D` (class 0) or
/// `Σx < −margin·D` (class 1).
pub fn gen_linsep(dim: usize, size: usize, margin: f64, seed: u64) -> Result<(Dataset, LinsepStats)> {
    check_balanced(dim, size)?;
    if !(0.0..FRAC_PI_2).contains(&margin) {
        return Err(domain(format!(
            "margin must lie in [0, π/2) for a nonempty acceptance region, got {margin}"
        )));
    }
    let threshold = margin * dim as f64;
    let mut rng = Rng::new(seed);
    let mut stats = LinsepStats { draws: 0, accepted: 0 };
    let mut samples = Vec::with_capacity(size);
    for i in 0..size {
        let class = i % 2;
        let features = loop {
            let x: Vec<f64> = (0..dim).map(|_| rng.uniform_range(-FRAC_PI_2, FRAC_PI_2)).collect();
            stats.draws += 1;
            let s: f64 = x.iter().sum();
            let hit = if class == 0 { s > threshold } else { s < -threshold };
            if hit {
                break x;
            }
        };
        stats.accepted += 1;
        samples.push(Sample {
            features,
            label: class as f64,
        });
    }
    Ok((Dataset::new(Task::Classification, dim, samples)?, stats))
}

/// `f(x) = ½(1 + tanh Σx)`.
pub fn regression_target(x: &[f64]) -> f64 {
    0.5 * (1.0 + x.iter().sum::<f64>().tanh())
}

/// Features uniform on `[−1, 1]^D` with targets from [`regression_target`].
pub fn gen_regression(dim: usize, size: usize, seed: u64) -> Result<Dataset> {
    if dim == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    let mut rng = Rng::new(seed);
    let samples = (0..size)
        .map(|_| {
            let features: Vec<f64> = (0..dim).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
            let label = regression_target(&features);
            Sample { features, label }
        })
        .collect();
    Dataset::new(Task::Regression, dim, samples)
}

/// `Σ = 0.8·I + 0.792·(J − I)`.
pub fn correlated_covariance(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            CORRELATED_VARIANCE
        } else {
            CORRELATED_COVARIANCE
        }
    })
}

/// Eigenvalues of [`correlated_covariance`], descending.
pub fn correlated_eigenvalues(dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(correlated_covariance(dim))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Class means as in [`gen_gaussian_means`] with the shared covariance
/// [`correlated_covariance`], sampled as `μ + V·diag(√λ)·z`.
pub fn gen_correlated(dim: usize, size: usize, seed: u64) -> Result<Dataset> {
    check_balanced(dim, size)?;
    if dim < 2 {
        return Err(domain("correlated data needs dimension at least 2"));
    }
    let eig = SymmetricEigen::new(correlated_covariance(dim));
    let min = eig.eigenvalues.min();
    if min < -1e-12 {
        return Err(domain(format!("covariance is not positive semidefinite (eigenvalue {min})")));
    }
    let scale = DVector::from_iterator(dim, eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()));
    let factor = &eig.eigenvectors * DMatrix::from_diagonal(&scale);
    let means = [class_means(dim, 0), class_means(dim, 1)];
    let mut rng = Rng::new(seed);
    let samples = (0..size)
        .map(|i| {
            let class = i % 2;
            let z = DVector::from_iterator(dim, (0..dim).map(|_| rng.standard_normal()));
            let x = &factor * z;
            let features = means[class].iter().zip(x.iter()).map(|(m, v)| m + v).collect();
            Sample {
                features,
                label: class as f64,
            }
        })
        .collect();
    Dataset::new(Task::Classification, dim, samples)
}

/// Mean per-coordinate variance of a dataset's features.
pub fn empirical_feature_variance(data: &Dataset) -> f64 {
    let n = data.len() as f64;
    if data.is_empty() || data.dim() == 0 {
        return 0.0;
    }
    let mut total = 0.0;
    for d in 0..data.dim() {
        let mean = data.samples().iter().map(|s| s.features[d]).sum::<f64>() / n;
        total += data
            .samples()
            .iter()
            .map(|s| (s.features[d] - mean).powi(2))
            .sum::<f64>()
            / n;
    }
    total / data.dim() as f64
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn class_means_examples() {
        assert_eq!(class_means(1, 0), vec![0.0]);
        assert!((class_means(1, 1)[0] - PI).abs() < 1e-15);
        let m = class_means(10, 0);
        assert!((m[9] - TAU / 16.0).abs() < 1e-15);
        assert!(class_means(16, 1).iter().all(|&v| (0.0..TAU).contains(&v)));
    }

    #[test]
    fn zero_variance_gives_means() {
        let d = gen_gaussian_means(5, 6, 0.0, 3).unwrap();
        for s in d.samples() {
            assert_eq!(s.features, class_means(5, s.class()));
        }
        assert_eq!(d.class_counts(), [3, 3]);
        assert!(gen_gaussian_means(5, 7, 0.8, 3).is_err());
    }

    #[test]
    fn linsep_predicate_and_balance() {
        let (d, stats) = gen_linsep(4, 200, 0.3, 9).unwrap();
        assert_eq!(d.class_counts(), [100, 100]);
        assert_eq!(stats.accepted, 200);
        for s in d.samples() {
            let sum: f64 = s.features.iter().sum();
            if s.class() == 0 {
                assert!(sum > 1.2);
            } else {
                assert!(sum < -1.2);
            }
        }
        assert!(gen_linsep(4, 10, FRAC_PI_2, 1).is_err());
    }

    #[test]
    fn regression_target_examples() {
        assert_eq!(regression_target(&[0.0, 0.0]), 0.5);
        assert!((regression_target(&[40.0]) - 1.0).abs() < 1e-15);
        let d = gen_regression(6, 10, 2).unwrap();
        assert_eq!(d.len(), 10);
        assert!(d.samples().iter().all(|s| (0.0..=1.0).contains(&s.label)));
    }

    #[test]
    fn correlated_eigenstructure() {
        let eig = correlated_eigenvalues(24);
        assert!((eig[0] - 19.016).abs() < 1e-10);
        assert!(eig[1..].iter().all(|&e| (e - 0.008).abs() < 1e-10));
    }
}
