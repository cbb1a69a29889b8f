//! The re-uploading model: circuit construction, hypotheses, losses,
//! gradients and training.

pub mod adam;
pub mod circuit;
pub mod gradient;
pub mod hypothesis;
pub mod io;
pub mod metrics;
pub mod train;

pub use adam::{adam_step, AdamConfig, Moments};
pub use circuit::{build_unitary, CircuitSpec, Entangler, ParameterTensor};
pub use gradient::{gradient, loss_and_gradient, GradientMethod};
pub use hypothesis::{decide, hypothesis_value, predict_class, Hypothesis};
pub use io::{ModelFile, MODEL_FORMAT};
pub use metrics::{empirical_error, evaluate, loss, LossKind, Metrics};
pub use train::{train, Selection, TrainConfig, TrainOutcome};
