use serde::{Deserialize, Serialize};

use super::hypothesis::{decide, Hypothesis};
use crate::data::{Dataset, Sample, Task};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    CrossEntropy,
    Mse,
}

/// What `h_S` should equal for a sample: 1 for classification (the correct
/// class is certain), the target value for regression.
pub fn ideal_output(task: Task, sample: &Sample) -> f64 {
    match task {
        Task::Classification => 1.0,
        Task::Regression => sample.label,
    }
}

/// Per-sample loss of an output `h` against its ideal value.
pub fn sample_loss(kind: LossKind, h: f64, ideal: f64, clip: f64) -> f64 {
    match kind {
        LossKind::CrossEntropy => -h.clamp(clip, 1.0 - clip).ln(),
        LossKind::Mse => (ideal - h).powi(2),
    }
}

/// `∂ sample_loss / ∂h`; zero where the probability clip is active.
pub fn sample_loss_derivative(kind: LossKind, h: f64, ideal: f64, clip: f64) -> f64 {
    match kind {
        LossKind::CrossEntropy => {
            if h <= clip || h >= 1.0 - clip {
                0.0
            } else {
                -1.0 / h
            }
        }
        LossKind::Mse => -2.0 * (ideal - h),
    }
}

pub(crate) fn check_loss_kind(task: Task, kind: LossKind) -> Result<()> {
    if task == Task::Regression && kind == LossKind::CrossEntropy {
        return Err(Error::Config(
            "cross-entropy needs probabilities; use mse for regression".into(),
        ));
    }
    Ok(())
}

/// Mean loss over a batch.
pub fn loss(h: &Hypothesis, batch: &[Sample], kind: LossKind, clip: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(domain("loss of an empty batch is undefined"));
    }
    check_loss_kind(h.task(), kind)?;
    let mut total = 0.0;
    for s in batch {
        let v = h.value(&s.features, s.label)?;
        total += sample_loss(kind, v, ideal_output(h.task(), s), clip);
    }
    Ok(total / batch.len() as f64)
}

/// Mean absolute deviation `(1/M) Σ |ideal − h_S|`.
pub fn empirical_error(h: &Hypothesis, data: &[Sample]) -> Result<f64> {
    if data.is_empty() {
        return Err(domain("error of an empty set is undefined"));
    }
    let mut total = 0.0;
    for s in data {
        let v = h.value(&s.features, s.label)?;
        total += (ideal_output(h.task(), s) - v).abs();
    }
    Ok(total / data.len() as f64)
}

/// Summary of a hypothesis on one dataset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// `(1/M) Σ |ideal − h_S|`.
    pub error: f64,
    /// Fraction classified correctly; `None` for regression.
    pub accuracy: Option<f64>,
    /// Classification: mean over classes of `|mean Tr[H_0 ρ] − ½|` within the
    /// class. Regression: `|mean h|`.
    pub h_gap: f64,
    pub loss: f64,
}

pub fn evaluate(h: &Hypothesis, data: &Dataset, kind: LossKind, clip: f64) -> Result<Metrics> {
    if data.is_empty() {
        return Err(domain("cannot evaluate on an empty dataset"));
    }
    if data.task() != h.task() {
        return Err(Error::Config(format!(
            "dataset task {:?} does not match hypothesis task {:?}",
            data.task(),
            h.task()
        )));
    }
    check_loss_kind(h.task(), kind)?;
    let m = data.len() as f64;
    let (mut err, mut correct, mut loss_total) = (0.0, 0usize, 0.0);
    let mut class_sum = [0.0f64; 2];
    let mut class_count = [0usize; 2];
    let mut out_sum = 0.0;
    for s in data.samples() {
        h.spec().check_data(&s.features)?;
        let ideal = ideal_output(h.task(), s);
        let hs = match h.task() {
            Task::Classification => {
                let (p0, p1) = h.class_outputs(&s.features)?;
                let c = s.class();
                if decide(p0, p1) == c {
                    correct += 1;
                }
                class_sum[c] += p0;
                class_count[c] += 1;
                if c == 0 {
                    p0
                } else {
                    p1
                }
            }
            Task::Regression => {
                let v = h.value_unchecked(&s.features, s.label);
                out_sum += v;
                v
            }
        };
        err += (ideal - hs).abs();
        loss_total += sample_loss(kind, hs, ideal, clip);
    }
    let (accuracy, h_gap) = match h.task() {
        Task::Classification => {
            let reference = h.observable_for(0.0).maximally_mixed_value();
            let gaps: Vec<f64> = (0..2)
                .filter(|&c| class_count[c] > 0)
                .map(|c| (class_sum[c] / class_count[c] as f64 - reference).abs())
                .collect();
            (
                Some(correct as f64 / m),
                gaps.iter().sum::<f64>() / gaps.len() as f64,
            )
        }
        Task::Regression => {
            let reference = h.observable_for(0.0).maximally_mixed_value();
            (None, (out_sum / m - reference).abs())
        }
    };
    Ok(Metrics {
        error: err / m,
        accuracy,
        h_gap,
        loss: loss_total / m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::circuit::{CircuitSpec, Entangler, ParameterTensor};
    use std::f64::consts::FRAC_PI_2;

    fn hyp(task: Task) -> Hypothesis {
        let spec = CircuitSpec::unpadded(1, 1, 1, Entangler::None).unwrap();
        Hypothesis::new(spec, ParameterTensor::zeros(&spec), task).unwrap()
    }

    fn sample(x: [f64; 3], label: f64) -> Sample {
        Sample {
            features: x.to_vec(),
            label,
        }
    }

    #[test]
    fn perfect_and_constant_classifiers() {
        let h = hyp(Task::Classification);
        // Identity circuit puts all weight on class 0.
        let perfect = [sample([0.0; 3], 0.0), sample([0.0; 3], 0.0)];
        assert_eq!(empirical_error(&h, &perfect).unwrap(), 0.0);
        // ry(π/2) gives h = ½ for either label.
        let half = [sample([0.0, FRAC_PI_2, 0.0], 0.0), sample([0.0, FRAC_PI_2, 0.0], 1.0)];
        assert!((empirical_error(&h, &half).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn regression_error_against_half() {
        let h = hyp(Task::Regression);
        // ry(π/2) on one qubit gives ⟨Z⟩ = 0.
        let data = [sample([0.0, FRAC_PI_2, 0.0], 0.5)];
        assert!((empirical_error(&h, &data).unwrap() - 0.5).abs() < 1e-15);
        assert!((loss(&h, &data, LossKind::Mse, 1e-7).unwrap() - 0.25).abs() < 1e-15);
        assert!(loss(&h, &data, LossKind::CrossEntropy, 1e-7).is_err());
    }

    #[test]
    fn empty_batch_rejected() {
        let h = hyp(Task::Classification);
        assert!(loss(&h, &[], LossKind::CrossEntropy, 1e-7).is_err());
    }

    #[test]
    fn cross_entropy_clips() {
        let v = sample_loss(LossKind::CrossEntropy, 0.0, 1.0, 1e-7);
        assert!((v - 1e7f64.ln()).abs() < 1e-9);
        assert_eq!(sample_loss_derivative(LossKind::CrossEntropy, 0.0, 1.0, 1e-7), 0.0);
        assert_eq!(sample_loss_derivative(LossKind::CrossEntropy, 0.5, 1.0, 1e-7), -2.0);
    }

    #[test]
    fn evaluate_identity_circuit() {
        let h = hyp(Task::Classification);
        let data = Dataset::new(
            Task::Classification,
            3,
            vec![sample([0.0; 3], 0.0), sample([0.0; 3], 1.0)],
        )
        .unwrap();
        let m = evaluate(&h, &data, LossKind::CrossEntropy, 1e-7).unwrap();
        assert_eq!(m.error, 0.5);
        assert_eq!(m.accuracy, Some(0.5));
        assert_eq!(m.h_gap, 0.5);
    }
}
