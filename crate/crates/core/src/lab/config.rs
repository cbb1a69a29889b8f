use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::data::generators::{DEFAULT_MARGIN, DEFAULT_SIGMA2};
use crate::error::{Error, Result};
use crate::model::{Entangler, LossKind, TrainConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Divergence,
    LinsepSweep,
    SameDataset,
    Regression,
    ScalingStudy,
    CounterExample,
    BoundSweep,
    ApproxCheck,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 8] = [
        Self::Divergence,
        Self::LinsepSweep,
        Self::SameDataset,
        Self::Regression,
        Self::ScalingStudy,
        Self::CounterExample,
        Self::BoundSweep,
        Self::ApproxCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Divergence => "divergence",
            Self::LinsepSweep => "linsep_sweep",
            Self::SameDataset => "same_dataset",
            Self::Regression => "regression",
            Self::ScalingStudy => "scaling_study",
            Self::CounterExample => "counter_example",
            Self::BoundSweep => "bound_sweep",
            Self::ApproxCheck => "approx_check",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.name() == s)
    }

    /// Whether results use the per-run record schema.
    pub fn trains(self) -> bool {
        !matches!(self, Self::BoundSweep | Self::ApproxCheck)
    }
}

/// Size presets. `paper` keeps the published sizes, `desk` shrinks them to
/// run on a workstation, `ci` is a smoke test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Paper,
    Desk,
    Ci,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(Self::Paper),
            "desk" => Some(Self::Desk),
            "ci" => Some(Self::Ci),
            _ => None,
        }
    }
}

/// Swept values. How the lists combine depends on the experiment; see
/// [`crate::lab::grid_points`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n_qubits: Vec<usize>,
    pub layers: Vec<usize>,
    pub repetitions: Vec<usize>,
    pub train_sizes: Vec<usize>,
    /// Fixed `L_max` for zero-padded circuits; `None` means `L_max = L`.
    #[serde(default)]
    pub total_layers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSettings {
    /// Root seed for every generated dataset; run seeds only drive
    /// initialization and shuffling.
    pub seed: u64,
    pub sigma2: f64,
    pub margin: f64,
    /// Fixed feature dimension for experiments that share one dataset.
    pub dim: usize,
    pub test_size: usize,
    /// Monte-Carlo draws per expected state.
    pub pool_size: usize,
}

impl Default for DataSettings {
    fn default() -> Self {
        Self {
            seed: 0,
            sigma2: DEFAULT_SIGMA2,
            margin: DEFAULT_MARGIN,
            dim: 24,
            test_size: 10_000,
            pool_size: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub grid: Grid,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub data: DataSettings,
    #[serde(default = "default_entangler")]
    pub entangler: Entangler,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Fill the `seconds` column. Off by default so reruns are byte-identical.
    #[serde(default)]
    pub record_timing: bool,
    /// Target accuracy for the layer threshold in `bound_sweep`.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Random instances for `approx_check`.
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// Fractional bits tried by `approx_check`.
    #[serde(default = "default_q_values")]
    pub q_values: Vec<u32>,
}

fn default_entangler() -> Entangler {
    Entangler::RingCnot
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_instances() -> usize {
    50
}

fn default_q_values() -> Vec<u32> {
    vec![2, 4, 8, 12]
}

fn range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}

fn seeds(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.n_qubits.is_empty() || g.layers.is_empty() || g.repetitions.is_empty() || g.train_sizes.is_empty() {
            return Err(Error::Config("every grid list must be nonempty".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must be nonempty".into()));
        }
        if g.n_qubits.iter().any(|&n| n == 0) || g.repetitions.iter().any(|&p| p == 0) {
            return Err(Error::Config("qubit counts and repetitions must be at least 1".into()));
        }
        if self.id.trains() {
            self.train.validate()?;
            if g.train_sizes.iter().any(|&m| m < 2 || m % 2 != 0) {
                return Err(Error::Config("train sizes must be even and at least 2".into()));
            }
            if self.data.test_size < 2 || self.data.test_size % 2 != 0 {
                return Err(Error::Config("test_size must be even and at least 2".into()));
            }
        }
        if let Some(lm) = g.total_layers {
            if let Some(&l) = g.layers.iter().find(|&&l| l > lm) {
                return Err(Error::Config(format!("layer count {l} exceeds total_layers {lm}")));
            }
        }
        let wants_mse = self.id == ExperimentId::Regression;
        if wants_mse && self.train.loss != LossKind::Mse {
            return Err(Error::Config("regression experiments train with loss = mse".into()));
        }
        if !(self.data.sigma2 > 0.0) {
            return Err(Error::Config("data.sigma2 must be positive".into()));
        }
        if matches!(self.id, ExperimentId::Divergence | ExperimentId::BoundSweep) && self.data.pool_size == 0 {
            return Err(Error::Config("data.pool_size must be positive".into()));
        }
        if self.id == ExperimentId::BoundSweep && !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Config("epsilon must lie in (0, 1)".into()));
        }
        if self.id == ExperimentId::ApproxCheck && (self.instances == 0 || self.q_values.is_empty()) {
            return Err(Error::Config("approx_check needs instances and q_values".into()));
        }
        Ok(())
    }

    /// Built-in configuration for an experiment at a given size profile.
    pub fn preset(id: ExperimentId, profile: Profile) -> Self {
        use Profile::*;
        let epochs = match profile {
            Paper => 1000,
            Desk => 300,
            Ci => 20,
        };
        let n_seeds = match profile {
            Paper => 10,
            Desk => 5,
            Ci => 2,
        };
        let test_size = match profile {
            Paper | Desk => 10_000,
            Ci => 1000,
        };
        let train = TrainConfig {
            epochs,
            ..TrainConfig::default()
        };
        let mut cfg = Self {
            id,
            grid: Grid {
                n_qubits: vec![1],
                layers: range(1, 8),
                repetitions: vec![1],
                train_sizes: vec![600],
                total_layers: None,
            },
            seeds: seeds(n_seeds),
            train,
            data: DataSettings {
                test_size,
                ..DataSettings::default()
            },
            entangler: Entangler::RingCnot,
            output_dir: None,
            record_timing: false,
            epsilon: default_epsilon(),
            instances: default_instances(),
            q_values: default_q_values(),
        };
        let ci = profile == Ci;
        match id {
            ExperimentId::Divergence => {
                cfg.grid.n_qubits = if ci { vec![1, 2] } else { vec![1, 2, 3] };
                cfg.grid.repetitions = if ci { vec![1, 2] } else { vec![1, 2, 4] };
                cfg.grid.layers = if ci { vec![0, 1, 2, 4] } else { range(0, 8) };
                cfg.grid.train_sizes = vec![if ci { 200 } else { 2000 }];
                cfg.data.pool_size = match profile {
                    Paper => 1_000_000,
                    Desk => 100_000,
                    Ci => 2000,
                };
            }
            ExperimentId::LinsepSweep | ExperimentId::CounterExample => {
                cfg.grid.total_layers = Some(8);
                cfg.grid.repetitions = if ci { vec![1, 8] } else { vec![1, 2, 4, 8] };
                cfg.grid.layers = if ci { vec![1, 4, 8] } else { range(1, 8) };
                if id == ExperimentId::CounterExample {
                    cfg.grid.repetitions = vec![8];
                    // The correlated fit is still improving at 300 epochs.
                    if profile == Desk {
                        cfg.train.epochs = 1000;
                    }
                }
                if ci {
                    cfg.grid.train_sizes = vec![200];
                }
            }
            ExperimentId::SameDataset => {
                cfg.grid.n_qubits = vec![1, 2, 4, 8];
                cfg.grid.layers = vec![8, 4, 2, 1];
                cfg.grid.repetitions = vec![8];
                cfg.entangler = Entangler::None;
                // Only four points; affordable at full length, and the wide
                // end underfits at 300 epochs.
                if profile == Desk {
                    cfg.train.epochs = 1000;
                }
                if ci {
                    cfg.grid.train_sizes = vec![200];
                }
            }
            ExperimentId::Regression => {
                cfg.grid.n_qubits = vec![2];
                cfg.grid.total_layers = Some(10);
                cfg.grid.layers = if ci { vec![1, 10] } else { range(1, 10) };
                cfg.train.loss = LossKind::Mse;
                if ci {
                    cfg.grid.train_sizes = vec![200];
                }
            }
            ExperimentId::ScalingStudy => {
                cfg.grid.layers = vec![8];
                if ci {
                    cfg.grid.train_sizes = vec![200, 400];
                    cfg.grid.repetitions = vec![1, 2];
                    cfg.train.epochs = 10;
                } else {
                    cfg.grid.train_sizes = vec![600, 1200, 2000, 5000];
                    cfg.grid.repetitions = vec![8, 16, 32, 64];
                }
            }
            ExperimentId::BoundSweep => {
                cfg.grid.n_qubits = vec![1, 2, 3];
                cfg.grid.layers = range(0, 12);
                cfg.seeds = vec![1];
                cfg.data.pool_size = match profile {
                    Paper => 1_000_000,
                    Desk => 100_000,
                    Ci => 20_000,
                };
            }
            ExperimentId::ApproxCheck => {
                cfg.grid.n_qubits = vec![1, 2];
                cfg.grid.layers = vec![1, 2, 3];
                cfg.grid.repetitions = vec![1, 2, 3];
                cfg.seeds = vec![1];
                cfg.instances = if ci { 20 } else { 50 };
            }
        }
        cfg
    }
}
