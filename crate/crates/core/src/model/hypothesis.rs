use super::circuit::{CircuitSpec, ParameterTensor, Program};
use crate::data::Task;
use crate::error::{domain, Result};
use crate::qsim::Observable;

/// Measurement results closer than this count as a tie, resolved to class 0.
pub const TIE_TOL: f64 = 1e-12;

/// A circuit with fixed parameters and the observables used to read it out:
/// `|0⟩⟨0|`, `|1⟩⟨1|` on qubit 0 for classification, `Z^{⊗N}` for regression.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    params: ParameterTensor,
    task: Task,
    program: Program,
    observables: Vec<Observable>,
}

impl Hypothesis {
    pub fn new(spec: CircuitSpec, params: ParameterTensor, task: Task) -> Result<Self> {
        params.check_spec(&spec)?;
        params.validate()?;
        let program = Program::new(&spec)?;
        let n = spec.n_qubits;
        let observables = match task {
            Task::Classification => vec![Observable::h0(n), Observable::h1(n)],
            Task::Regression => vec![Observable::tensor_z(n)],
        };
        Ok(Self {
            params,
            task,
            program,
            observables,
        })
    }

    pub fn spec(&self) -> &CircuitSpec {
        self.program.spec()
    }

    pub fn params(&self) -> &ParameterTensor {
        &self.params
    }

    pub fn task(&self) -> Task {
        self.task
    }

    /// Replaces the parameters, keeping the circuit and observables.
    pub(crate) fn set_params(&mut self, params: ParameterTensor) -> Result<()> {
        params.check_spec(self.program.spec())?;
        params.validate()?;
        self.params = params;
        Ok(())
    }

    pub(crate) fn program(&self) -> &Program {
        &self.program
    }

    /// Observable that scores a sample with this label.
    pub fn observable_for(&self, label: f64) -> &Observable {
        match self.task {
            Task::Classification => &self.observables[usize::from(label >= 0.5)],
            Task::Regression => &self.observables[0],
        }
    }

    /// `Tr[H_0 ρ]` for classification or `Tr[Z^{⊗N} ρ]` for regression.
    pub fn reference_output(&self, x: &[f64]) -> Result<f64> {
        self.spec().check_data(x)?;
        Ok(self
            .program
            .expectation(x, self.params.values(), &self.observables[0]))
    }

    /// `h_S(x)`: the probability of `label` for classification, or the
    /// regression output (label ignored).
    pub fn value(&self, x: &[f64], label: f64) -> Result<f64> {
        self.spec().check_data(x)?;
        if self.task == Task::Classification && label != 0.0 && label != 1.0 {
            return Err(domain(format!("class label must be 0 or 1, got {label}")));
        }
        Ok(self.value_unchecked(x, label))
    }

    pub(crate) fn value_unchecked(&self, x: &[f64], label: f64) -> f64 {
        self.program
            .expectation(x, self.params.values(), self.observable_for(label))
    }

    /// Both class measurement results `(Tr[H_0 ρ], Tr[H_1 ρ])`.
    pub fn class_outputs(&self, x: &[f64]) -> Result<(f64, f64)> {
        if self.task != Task::Classification {
            return Err(domain("class outputs need a classification hypothesis"));
        }
        self.spec().check_data(x)?;
        let theta = self.params.values();
        Ok((
            self.program.expectation(x, theta, &self.observables[0]),
            self.program.expectation(x, theta, &self.observables[1]),
        ))
    }

    pub fn predict_class(&self, x: &[f64]) -> Result<usize> {
        let (p0, p1) = self.class_outputs(x)?;
        Ok(decide(p0, p1))
    }
}

/// Class with the larger measurement result; ties go to class 0.
pub fn decide(p0: f64, p1: f64) -> usize {
    if p1 - p0 > TIE_TOL {
        1
    } else {
        0
    }
}

pub fn hypothesis_value(h: &Hypothesis, x: &[f64], label: f64) -> Result<f64> {
    h.value(x, label)
}

pub fn predict_class(h: &Hypothesis, x: &[f64]) -> Result<usize> {
    h.predict_class(x)
}
