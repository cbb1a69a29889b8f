use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::generators::{
    gen_correlated, gen_gaussian_means, gen_linsep, gen_regression, DEFAULT_MARGIN, DEFAULT_SIGMA2,
};
use super::idx::load_idx_images;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    GaussianMeans,
    Linsep,
    RegressionTanh,
    CorrelatedGaussian,
    IdxImages,
}

/// Everything needed to reproduce one dataset file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub dim: usize,
    pub size: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    #[serde(default = "default_margin")]
    pub margin: f64,
    /// IDX inputs; `dim` must then be a square side length squared.
    #[serde(default)]
    pub images: Option<PathBuf>,
    #[serde(default)]
    pub labels: Option<PathBuf>,
    #[serde(default = "default_angle_scale")]
    pub angle_scale: f64,
}

fn default_sigma2() -> f64 {
    DEFAULT_SIGMA2
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

fn default_angle_scale() -> f64 {
    PI
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind, dim: usize, size: usize, seed: u64) -> Self {
        Self {
            kind,
            dim,
            size,
            seed,
            sigma2: DEFAULT_SIGMA2,
            margin: DEFAULT_MARGIN,
            images: None,
            labels: None,
            angle_scale: PI,
        }
    }

    pub fn generate(&self) -> Result<Dataset> {
        match self.kind {
            DatasetKind::GaussianMeans => gen_gaussian_means(self.dim, self.size, self.sigma2, self.seed),
            DatasetKind::Linsep => Ok(gen_linsep(self.dim, self.size, self.margin, self.seed)?.0),
            DatasetKind::RegressionTanh => gen_regression(self.dim, self.size, self.seed),
            DatasetKind::CorrelatedGaussian => gen_correlated(self.dim, self.size, self.seed),
            DatasetKind::IdxImages => self.load_images(),
        }
    }

    fn load_images(&self) -> Result<Dataset> {
        let (Some(images), Some(labels)) = (&self.images, &self.labels) else {
            return Err(Error::Config("idx_images needs both `images` and `labels` paths".into()));
        };
        let side = (self.dim as f64).sqrt().round() as usize;
        if side * side != self.dim || side == 0 {
            return Err(Error::Config(format!(
                "idx_images dimension must be a nonzero perfect square, got {}",
                self.dim
            )));
        }
        let all = load_idx_images(images, labels, side, self.angle_scale)?;
        // Keep the first `size` samples, alternating classes where possible.
        let mut by_class: [Vec<crate::data::Sample>; 2] = [Vec::new(), Vec::new()];
        for s in all.samples() {
            by_class[s.class()].push(s.clone());
        }
        let mut out = Vec::with_capacity(self.size);
        let [c0, c1] = by_class;
        let (mut a, mut b) = (c0.into_iter(), c1.into_iter());
        while out.len() < self.size {
            let next = if out.len() % 2 == 0 { a.next().or_else(|| b.next()) } else { b.next().or_else(|| a.next()) };
            match next {
                Some(s) => out.push(s),
                None => break,
            }
        }
        Dataset::new(all.task(), self.dim, out)
    }
}
