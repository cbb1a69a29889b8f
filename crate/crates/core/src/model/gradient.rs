//! Loss gradients with respect to the trainable angles.
//!
//! Every trainable angle drives a rotation `exp(−iθG/2)` with a Pauli
//! generator, so the parameter-shift rule is exact. The adjoint sweep computes
//! the same derivatives from one forward and one backward pass.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::circuit::{CircuitSpec, ParameterTensor};
use super::hypothesis::Hypothesis;
use super::metrics::{check_loss_kind, ideal_output, sample_loss, sample_loss_derivative, LossKind};
use crate::data::{Sample, Task};
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    ParameterShift,
    Adjoint,
}

fn check_batch(h: &Hypothesis, batch: &[Sample]) -> Result<()> {
    if batch.is_empty() {
        return Err(domain("gradient of an empty batch is undefined"));
    }
    for s in batch {
        h.spec().check_data(&s.features)?;
    }
    Ok(())
}

/// Mean loss and its gradient over a batch, by the chosen method.
pub fn loss_and_gradient(
    h: &Hypothesis,
    batch: &[Sample],
    kind: LossKind,
    clip: f64,
    method: GradientMethod,
) -> Result<(f64, Vec<f64>)> {
    check_batch(h, batch)?;
    check_loss_kind(h.task(), kind)?;
    let program = h.program();
    let theta = h.params().values();
    let m = batch.len() as f64;
    let mut grad = vec![0.0; theta.len()];
    let mut total = 0.0;
    match method {
        GradientMethod::Adjoint => {
            let mut local = vec![0.0; theta.len()];
            for s in batch {
                let obs = h.observable_for(s.label);
                let ideal = ideal_output(h.task(), s);
                local.iter_mut().for_each(|g| *g = 0.0);
                let v = program.value_and_grad(&s.features, theta, obs, 1.0, &mut local);
                total += sample_loss(kind, v, ideal, clip);
                let w = sample_loss_derivative(kind, v, ideal, clip) / m;
                for (g, l) in grad.iter_mut().zip(&local) {
                    *g += w * l;
                }
            }
        }
        GradientMethod::ParameterShift => {
            let mut shifted = theta.to_vec();
            for s in batch {
                let obs = h.observable_for(s.label);
                let ideal = ideal_output(h.task(), s);
                let v = program.expectation(&s.features, theta, obs);
                total += sample_loss(kind, v, ideal, clip);
                let w = sample_loss_derivative(kind, v, ideal, clip) / m;
                for k in 0..theta.len() {
                    shifted[k] = theta[k] + FRAC_PI_2;
                    let plus = program.expectation(&s.features, &shifted, obs);
                    shifted[k] = theta[k] - FRAC_PI_2;
                    let minus = program.expectation(&s.features, &shifted, obs);
                    shifted[k] = theta[k];
                    grad[k] += w * 0.5 * (plus - minus);
                }
            }
        }
    }
    Ok((total / m, grad))
}

/// Parameter-shift gradient of the mean batch loss, shaped like `θ`.
pub fn gradient(
    batch: &[Sample],
    spec: &CircuitSpec,
    theta: &ParameterTensor,
    task: Task,
    kind: LossKind,
    clip: f64,
) -> Result<ParameterTensor> {
    let h = Hypothesis::new(*spec, theta.clone(), task)?;
    let (_, g) = loss_and_gradient(&h, batch, kind, clip, GradientMethod::ParameterShift)?;
    ParameterTensor::from_vec(spec, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::circuit::Entangler;

    fn sample(features: Vec<f64>, label: f64) -> Sample {
        Sample { features, label }
    }

    #[test]
    fn single_rotation_matches_closed_form() {
        // h = Tr[H_0 ρ] = cos²(θ_y/2) = (1 + cos θ_y)/2 with the data gate at zero.
        let spec = CircuitSpec::unpadded(1, 1, 1, Entangler::None).unwrap();
        for k in 0..20 {
            let t = -3.0 + 0.3 * k as f64;
            let theta = ParameterTensor::from_vec(&spec, vec![0.0, t, 0.0]).unwrap();
            let batch = [sample(vec![0.0; 3], 0.0)];
            // MSE against ideal 1: L = (1 − h)², dL/dθ = −2(1 − h)·(−sin θ / 2).
            let h = (1.0 + t.cos()) / 2.0;
            let expected = -2.0 * (1.0 - h) * (-t.sin() / 2.0);
            for method in [GradientMethod::ParameterShift, GradientMethod::Adjoint] {
                let hyp = Hypothesis::new(spec, theta.clone(), Task::Classification).unwrap();
                let (_, g) = loss_and_gradient(&hyp, &batch, LossKind::Mse, 1e-7, method).unwrap();
                assert!((g[1] - expected).abs() < 1e-12, "{method:?}");
                assert!(g[0].abs() < 1e-12 && g[2].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn methods_agree_on_entangled_circuit() {
        let spec = CircuitSpec::new(3, 2, 3, 2, Entangler::RingCnot).unwrap();
        let theta = ParameterTensor::from_vec(
            &spec,
            (0..spec.n_params()).map(|k| ((k * 37 % 101) as f64) / 17.0 - 3.0).collect(),
        )
        .unwrap();
        let batch: Vec<Sample> = (0..3)
            .map(|i| sample((0..18).map(|k| ((k + 5 * i) as f64 * 0.61).sin() * 2.0).collect(), (i % 2) as f64))
            .collect();
        let h = Hypothesis::new(spec, theta, Task::Classification).unwrap();
        let (la, a) = loss_and_gradient(&h, &batch, LossKind::CrossEntropy, 1e-7, GradientMethod::Adjoint).unwrap();
        let (lb, b) =
            loss_and_gradient(&h, &batch, LossKind::CrossEntropy, 1e-7, GradientMethod::ParameterShift).unwrap();
        assert_eq!(la, lb);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_batch_rejected() {
        let spec = CircuitSpec::unpadded(1, 1, 1, Entangler::None).unwrap();
        let h = Hypothesis::new(spec, ParameterTensor::zeros(&spec), Task::Classification).unwrap();
        assert!(loss_and_gradient(&h, &[], LossKind::Mse, 1e-7, GradientMethod::Adjoint).is_err());
    }
}
