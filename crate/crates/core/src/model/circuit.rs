//! Re-uploading circuit layout, parameter storage and simulation.
//!
//! A circuit runs `P` repetitions of `L_max` layers. Each layer applies an
//! encoding gate `r3(x_{l,n})` on every qubit (zeros past the first `L`
//! layers), then a trainable `r3(θ_{p,l,n})` on every qubit, then the
//! entangler.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::rng::Rng;
use crate::error::{domain, Error, Result};
use crate::qsim::gates::Gate2;
use crate::qsim::matrix::ZERO;
use crate::qsim::state::{apply_cnot_raw, apply_rotation_raw, generator_im_inner};
use crate::qsim::{cnot_ring, embed, r3, Axis, ComplexMatrix, Observable, StateVector, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    RingCnot,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub encoding_layers: usize,
    pub total_layers: usize,
    pub repetitions: usize,
    pub entangler: Entangler,
}

impl CircuitSpec {
    pub fn new(
        n_qubits: usize,
        encoding_layers: usize,
        total_layers: usize,
        repetitions: usize,
        entangler: Entangler,
    ) -> Result<Self> {
        let spec = Self {
            n_qubits,
            encoding_layers,
            total_layers,
            repetitions,
            entangler,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Circuit without padding: `L_max = L`.
    pub fn unpadded(n_qubits: usize, layers: usize, repetitions: usize, entangler: Entangler) -> Result<Self> {
        Self::new(n_qubits, layers, layers, repetitions, entangler)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
            return Err(domain(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {}",
                self.n_qubits
            )));
        }
        if self.encoding_layers > self.total_layers {
            return Err(domain(format!(
                "encoding layers ({}) exceed total layers ({})",
                self.encoding_layers, self.total_layers
            )));
        }
        if self.repetitions == 0 {
            return Err(domain("repetitions must be at least 1"));
        }
        Ok(())
    }

    /// `3·N·L`.
    pub fn data_dim(&self) -> usize {
        3 * self.n_qubits * self.encoding_layers
    }

    /// `P·L_max·N·3`.
    pub fn n_params(&self) -> usize {
        3 * self.n_qubits * self.total_layers * self.repetitions
    }

    /// Position of `x_{l,n,i}` in a data vector (all zero-based).
    pub fn feature_index(&self, layer: usize, qubit: usize, component: usize) -> usize {
        (layer * self.n_qubits + qubit) * 3 + component
    }

    fn entangles(&self) -> bool {
        self.entangler == Entangler::RingCnot && self.n_qubits >= 2
    }

    pub(crate) fn check_data(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.data_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.data_dim(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Trainable angles `θ[p][l][n][i]`, stored flat in that order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterTensor {
    shape: [usize; 4],
    values: Vec<f64>,
}

impl ParameterTensor {
    pub fn zeros(spec: &CircuitSpec) -> Self {
        Self {
            shape: Self::shape_of(spec),
            values: vec![0.0; spec.n_params()],
        }
    }

    pub fn from_vec(spec: &CircuitSpec, values: Vec<f64>) -> Result<Self> {
        let t = Self {
            shape: Self::shape_of(spec),
            values,
        };
        t.validate()?;
        Ok(t)
    }

    /// I.i.d. standard normal entries.
    pub fn random_normal(spec: &CircuitSpec, rng: &mut Rng) -> Self {
        let values = (0..spec.n_params()).map(|_| rng.standard_normal()).collect();
        Self {
            shape: Self::shape_of(spec),
            values,
        }
    }

    fn shape_of(spec: &CircuitSpec) -> [usize; 4] {
        [spec.repetitions, spec.total_layers, spec.n_qubits, 3]
    }

    pub fn validate(&self) -> Result<()> {
        let expected: usize = self.shape.iter().product();
        if self.values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.values.len(),
            });
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(domain(format!("parameters must be finite, found {v}")));
        }
        Ok(())
    }

    pub(crate) fn check_spec(&self, spec: &CircuitSpec) -> Result<()> {
        let shape = Self::shape_of(spec);
        if self.shape != shape {
            return Err(domain(format!(
                "parameter shape {:?} does not match circuit shape {:?}",
                self.shape, shape
            )));
        }
        Ok(())
    }

    /// `[P, L_max, N, 3]`.
    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn index(&self, p: usize, l: usize, n: usize, i: usize) -> usize {
        ((p * self.shape[1] + l) * self.shape[2] + n) * 3 + i
    }

    pub fn get(&self, p: usize, l: usize, n: usize) -> [f64; 3] {
        let k = self.index(p, l, n, 0);
        [self.values[k], self.values[k + 1], self.values[k + 2]]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// The full circuit unitary, composed from dense gate matrices.
pub fn build_unitary(spec: &CircuitSpec, x: &[f64], theta: &ParameterTensor) -> Result<ComplexMatrix> {
    spec.validate()?;
    spec.check_data(x)?;
    theta.check_spec(spec)?;
    let n = spec.n_qubits;
    let ring = if spec.entangles() { Some(cnot_ring(n)?) } else { None };
    let mut u = ComplexMatrix::identity(1 << n);
    for p in 0..spec.repetitions {
        for l in 0..spec.total_layers {
            for q in 0..n {
                let phi = if l < spec.encoding_layers {
                    let k = spec.feature_index(l, q, 0);
                    [x[k], x[k + 1], x[k + 2]]
                } else {
                    [0.0; 3]
                };
                u = embed(&r3(phi[0], phi[1], phi[2])?, q, n)?.matmul(&u);
            }
            for q in 0..n {
                let t = theta.get(p, l, q);
                u = embed(&r3(t[0], t[1], t[2])?, q, n)?.matmul(&u);
            }
            if let Some(r) = &ring {
                u = r.matmul(&u);
            }
        }
    }
    Ok(u)
}

#[derive(Clone, Copy, Debug)]
enum Angle {
    Data(usize),
    Param(usize),
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Rot { axis: Axis, qubit: usize, angle: Angle },
    Cnot { control: usize, target: usize },
}

impl Op {
    fn angle_value(angle: Angle, x: &[f64], theta: &[f64]) -> f64 {
        match angle {
            Angle::Data(k) => x[k],
            Angle::Param(k) => theta[k],
        }
    }
}

const R3_AXES: [Axis; 3] = [Axis::Z, Axis::Y, Axis::Z];

/// A circuit lowered to a flat gate list, with padded encoding layers dropped.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    spec: CircuitSpec,
    ops: Vec<Op>,
    /// Per-qubit gate lists with qubit indices rewritten to 0, present when the
    /// circuit never entangles.
    per_qubit: Option<Vec<Vec<Op>>>,
}

impl Program {
    pub(crate) fn new(spec: &CircuitSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n_qubits;
        let mut ops = Vec::new();
        for p in 0..spec.repetitions {
            for l in 0..spec.total_layers {
                if l < spec.encoding_layers {
                    for q in 0..n {
                        for (i, &axis) in R3_AXES.iter().enumerate() {
                            let k = spec.feature_index(l, q, i);
                            ops.push(Op::Rot { axis, qubit: q, angle: Angle::Data(k) });
                        }
                    }
                }
                for q in 0..n {
                    for (i, &axis) in R3_AXES.iter().enumerate() {
                        let k = ((p * spec.total_layers + l) * n + q) * 3 + i;
                        ops.push(Op::Rot { axis, qubit: q, angle: Angle::Param(k) });
                    }
                }
                if spec.entangles() {
                    for q in 0..n {
                        ops.push(Op::Cnot { control: q, target: (q + 1) % n });
                    }
                }
            }
        }
        let per_qubit = if spec.entangles() {
            None
        } else {
            let mut lists = vec![Vec::new(); n];
            for op in &ops {
                if let Op::Rot { axis, qubit, angle } = *op {
                    lists[qubit].push(Op::Rot { axis, qubit: 0, angle });
                }
            }
            Some(lists)
        };
        Ok(Self { spec: *spec, ops, per_qubit })
    }

    pub(crate) fn spec(&self) -> &CircuitSpec {
        &self.spec
    }

    fn run(n: usize, ops: &[Op], x: &[f64], theta: &[f64], amps: &mut [Complex64]) {
        for op in ops {
            match *op {
                Op::Rot { axis, qubit, angle } => {
                    let a = Op::angle_value(angle, x, theta);
                    apply_rotation_raw(amps, n, axis, a, qubit);
                }
                Op::Cnot { control, target } => apply_cnot_raw(amps, n, control, target),
            }
        }
    }

    /// Final state `V(x, θ)|0…0⟩`.
    pub(crate) fn state(&self, x: &[f64], theta: &[f64]) -> StateVector {
        let n = self.spec.n_qubits;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        match &self.per_qubit {
            Some(lists) if n > 1 => {
                // Kronecker product of independently evolved qubits.
                let locals: Vec<[Complex64; 2]> = lists
                    .iter()
                    .map(|ops| {
                        let mut a = [Complex64::new(1.0, 0.0), ZERO];
                        Self::run(1, ops, x, theta, &mut a);
                        a
                    })
                    .collect();
                for (idx, out) in amps.iter_mut().enumerate() {
                    *out = (0..n)
                        .map(|q| locals[q][(idx >> (n - 1 - q)) & 1])
                        .product();
                }
            }
            _ => Self::run(n, &self.ops, x, theta, &mut amps),
        }
        StateVector::from_raw(n, amps)
    }

    /// `⟨ψ(x,θ)|H|ψ(x,θ)⟩`.
    pub(crate) fn expectation(&self, x: &[f64], theta: &[f64], obs: &Observable) -> f64 {
        if let Some(v) = self.product_route(x, theta, obs, None) {
            return v;
        }
        let psi = self.state(x, theta);
        obs.expectation_raw(psi.amplitudes())
    }

    /// Returns `⟨H⟩` and adds `weight · ∂⟨H⟩/∂θ` into `grad`.
    pub(crate) fn value_and_grad(
        &self,
        x: &[f64],
        theta: &[f64],
        obs: &Observable,
        weight: f64,
        grad: &mut [f64],
    ) -> f64 {
        if let Some(v) = self.product_route(x, theta, obs, Some((weight, &mut *grad))) {
            return v;
        }
        let n = self.spec.n_qubits;
        let psi = self.state(x, theta);
        let mut psi = psi.amplitudes().to_vec();
        let value = obs.expectation_raw(&psi);
        let mut lambda = obs.apply_raw(&psi);
        Self::adjoint_sweep(n, &self.ops, x, theta, &mut psi, &mut lambda, weight, grad);
        value
    }

    /// Reverse pass: for every trainable rotation `exp(−iθG/2)` the derivative
    /// of `⟨ψ|H|ψ⟩` is `Im⟨λ|G|ψ⟩` with both vectors taken just after the gate.
    #[allow(clippy::too_many_arguments)]
    fn adjoint_sweep(
        n: usize,
        ops: &[Op],
        x: &[f64],
        theta: &[f64],
        psi: &mut [Complex64],
        lambda: &mut [Complex64],
        weight: f64,
        grad: &mut [f64],
    ) {
        for op in ops.iter().rev() {
            match *op {
                Op::Rot { axis, qubit, angle } => {
                    if let Angle::Param(k) = angle {
                        grad[k] += weight * generator_im_inner(lambda, psi, n, axis, qubit);
                    }
                    let a = -Op::angle_value(angle, x, theta);
                    apply_rotation_raw(psi, n, axis, a, qubit);
                    apply_rotation_raw(lambda, n, axis, a, qubit);
                }
                Op::Cnot { control, target } => {
                    apply_cnot_raw(psi, n, control, target);
                    apply_cnot_raw(lambda, n, control, target);
                }
            }
        }
    }

    /// Unentangled circuits with product observables: `⟨H⟩ = ∏_n ⟨o_n⟩`.
    fn product_route(
        &self,
        x: &[f64],
        theta: &[f64],
        obs: &Observable,
        grad: Option<(f64, &mut [f64])>,
    ) -> Option<f64> {
        let lists = self.per_qubit.as_ref()?;
        let factors = obs.product_factors()?;
        let mut states = Vec::with_capacity(lists.len());
        let mut values = Vec::with_capacity(lists.len());
        for (ops, factor) in lists.iter().zip(&factors) {
            match factor {
                Some(g) => {
                    let mut a = [Complex64::new(1.0, 0.0), ZERO];
                    Self::run(1, ops, x, theta, &mut a);
                    let ga = apply_gate(g, &a);
                    values.push((a[0].conj() * ga[0] + a[1].conj() * ga[1]).re);
                    states.push(Some((a, ga)));
                }
                None => {
                    values.push(1.0);
                    states.push(None);
                }
            }
        }
        let value: f64 = values.iter().product();
        if let Some((weight, grad)) = grad {
            for (q, entry) in states.into_iter().enumerate() {
                let Some((mut a, mut ga)) = entry else { continue };
                let others: f64 = values
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != q)
                    .map(|(_, v)| v)
                    .product();
                Self::adjoint_sweep(1, &lists[q], x, theta, &mut a, &mut ga, weight * others, grad);
            }
        }
        Some(value)
    }
}

fn apply_gate(g: &Gate2, a: &[Complex64; 2]) -> [Complex64; 2] {
    [g[0][0] * a[0] + g[0][1] * a[1], g[1][0] * a[0] + g[1][1] * a[1]]
}
