use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, Moments};
use super::circuit::{CircuitSpec, ParameterTensor};
use super::gradient::{loss_and_gradient, GradientMethod};
use super::hypothesis::Hypothesis;
use super::metrics::{empirical_error, LossKind};
use crate::data::rng::{Rng, Stream};
use crate::data::{Dataset, Sample};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    LowestTrainingError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub loss: LossKind,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub prob_clip: f64,
    pub selection: Selection,
    pub gradient: GradientMethod,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.005,
            epochs: 1000,
            batch_size: 200,
            seed: 0,
            loss: LossKind::CrossEntropy,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            prob_clip: 1e-7,
            selection: Selection::LowestTrainingError,
            gradient: GradientMethod::Adjoint,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if !(self.prob_clip > 0.0 && self.prob_clip < 0.1) {
            return Err(Error::Config(format!(
                "prob_clip must lie in (0, 0.1), got {}",
                self.prob_clip
            )));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::Config(format!("{name} must lie in [0, 1), got {b}")));
            }
        }
        if !(self.adam_eps > 0.0) {
            return Err(Error::Config("adam_eps must be positive".into()));
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub hypothesis: Hypothesis,
    /// Training error after each epoch.
    pub history: Vec<f64>,
    /// Zero-based epoch whose parameters were kept; `None` when no epoch ran.
    pub best_epoch: Option<usize>,
}

/// Minibatch Adam from `N(0, 1)` initial angles, keeping the post-epoch
/// parameters with the lowest training error (earliest on ties).
pub fn train(data: &Dataset, spec: &CircuitSpec, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    spec.validate()?;
    if data.is_empty() {
        return Err(domain("cannot train on an empty dataset"));
    }
    if data.dim() != spec.data_dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.data_dim(),
            found: data.dim(),
        });
    }
    let task = data.task();
    let mut init_rng = Rng::derived(config.seed, Stream::Init, 0);
    let initial = ParameterTensor::random_normal(spec, &mut init_rng);
    let mut current = Hypothesis::new(*spec, initial, task)?;
    let mut best = current.clone();
    let mut best_error = f64::INFINITY;
    let mut best_epoch = None;
    let mut history = Vec::with_capacity(config.epochs);

    let mut shuffle_rng = Rng::derived(config.seed, Stream::Shuffle, 0);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut moments = Moments::zeros(spec.n_params());
    let mut step = 0u64;
    let adam = config.adam();
    let mut batch: Vec<Sample> = Vec::with_capacity(config.batch_size);

    for epoch in 0..config.epochs {
        shuffle_rng.shuffle(&mut order);
        for chunk in order.chunks(config.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data.samples()[i].clone()));
            let (_, grad) =
                loss_and_gradient(&current, &batch, config.loss, config.prob_clip, config.gradient)?;
            step += 1;
            let (next, m) = adam_step(current.params().values(), &grad, &moments, step, &adam)?;
            moments = m;
            current.set_params(ParameterTensor::from_vec(spec, next)?)?;
        }
        let err = empirical_error(&current, data.samples())?;
        log::trace!("epoch {epoch}: train error {err:.6}");
        history.push(err);
        if err < best_error {
            best_error = err;
            best = current.clone();
            best_epoch = Some(epoch);
        }
    }
    Ok(TrainOutcome {
        hypothesis: if best_epoch.is_some() { best } else { current },
        history,
        best_epoch,
    })
}
