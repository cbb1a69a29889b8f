use std::path::Path;

use serde::{Deserialize, Serialize};

use super::circuit::{CircuitSpec, ParameterTensor};
use super::hypothesis::Hypothesis;
use crate::data::Task;
use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "reupload-lab-model/1";

/// On-disk model: circuit layout, parameter shape `[P, L_max, N, 3]` and the
/// flattened angles in that order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub task: Task,
    pub spec: CircuitSpec,
    pub shape: [usize; 4],
    pub theta: Vec<f64>,
    /// Training error recorded when the model was saved.
    #[serde(default)]
    pub train_error: Option<f64>,
}

impl ModelFile {
    pub fn from_hypothesis(h: &Hypothesis, train_error: Option<f64>) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            task: h.task(),
            spec: *h.spec(),
            shape: h.params().shape(),
            theta: h.params().values().to_vec(),
            train_error,
        }
    }

    pub fn to_hypothesis(&self) -> Result<Hypothesis> {
        if self.format != MODEL_FORMAT {
            return Err(Error::Format(format!(
                "unsupported model format `{}` (expected `{MODEL_FORMAT}`)",
                self.format
            )));
        }
        self.spec.validate()?;
        let theta = ParameterTensor::from_vec(&self.spec, self.theta.clone())?;
        if theta.shape() != self.shape {
            return Err(Error::Format(format!(
                "shape header {:?} does not match the circuit ({:?})",
                self.shape,
                theta.shape()
            )));
        }
        Hypothesis::new(self.spec, theta, self.task)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::rng::Rng;
    use crate::model::circuit::Entangler;

    #[test]
    fn json_round_trip_is_exact() {
        let spec = CircuitSpec::new(2, 1, 2, 2, Entangler::RingCnot).unwrap();
        let theta = ParameterTensor::random_normal(&spec, &mut Rng::new(5));
        let h = Hypothesis::new(spec, theta, Task::Classification).unwrap();
        let file = ModelFile::from_hypothesis(&h, Some(0.25));
        let back: ModelFile = serde_json::from_str(&file.to_json().unwrap()).unwrap();
        assert_eq!(back, file);
        let h2 = back.to_hypothesis().unwrap();
        assert_eq!(h2.params(), h.params());
        let x = vec![0.3; 6];
        assert_eq!(h2.value(&x, 1.0).unwrap(), h.value(&x, 1.0).unwrap());
    }

    #[test]
    fn bad_shape_rejected() {
        let spec = CircuitSpec::unpadded(1, 1, 1, Entangler::None).unwrap();
        let h = Hypothesis::new(spec, ParameterTensor::zeros(&spec), Task::Regression).unwrap();
        let mut file = ModelFile::from_hypothesis(&h, None);
        file.shape = [1, 1, 1, 2];
        assert!(file.to_hypothesis().is_err());
        file.shape = [1, 1, 1, 3];
        file.theta.pop();
        assert!(file.to_hypothesis().is_err());
    }
}
