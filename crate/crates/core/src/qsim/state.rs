use num_complex::Complex64;

use super::gates::{Axis, Gate2};
use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{domain, Error, Result};

/// Tolerance used when validating constructed states.
pub const CONSTRUCTION_TOL: f64 = 1e-10;

/// Pure state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        Self { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(domain(format!("state length {} is not a power of two", amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(domain(format!("state is not normalized (squared norm {norm})")));
        }
        Ok(Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies a 2×2 gate to one qubit with a stride loop.
    pub fn apply_single(&mut self, gate: &Gate2, qubit: usize) {
        apply_single_raw(&mut self.amps, self.n_qubits, gate, qubit);
    }

    pub fn apply_rotation(&mut self, axis: Axis, angle: f64, qubit: usize) {
        apply_rotation_raw(&mut self.amps, self.n_qubits, axis, angle, qubit);
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        apply_cnot_raw(&mut self.amps, self.n_qubits, control, target);
    }
}

pub(crate) fn apply_single_raw(amps: &mut [Complex64], n_qubits: usize, g: &Gate2, qubit: usize) {
    let stride = 1usize << (n_qubits - 1 - qubit);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = g[0][0] * a0 + g[0][1] * a1;
            amps[i + stride] = g[1][0] * a0 + g[1][1] * a1;
        }
        base += 2 * stride;
    }
}

pub(crate) fn apply_rotation_raw(
    amps: &mut [Complex64],
    n_qubits: usize,
    axis: Axis,
    angle: f64,
    qubit: usize,
) {
    let stride = 1usize << (n_qubits - 1 - qubit);
    let dim = amps.len();
    let (s, c) = (angle / 2.0).sin_cos();
    let mut base = 0;
    match axis {
        Axis::Z => {
            let p0 = Complex64::new(c, -s);
            let p1 = Complex64::new(c, s);
            while base < dim {
                for i in base..base + stride {
                    amps[i] *= p0;
                    amps[i + stride] *= p1;
                }
                base += 2 * stride;
            }
        }
        Axis::Y => {
            while base < dim {
                for i in base..base + stride {
                    let a0 = amps[i];
                    let a1 = amps[i + stride];
                    amps[i] = a0 * c - a1 * s;
                    amps[i + stride] = a0 * s + a1 * c;
                }
                base += 2 * stride;
            }
        }
    }
}

pub(crate) fn apply_cnot_raw(amps: &mut [Complex64], n_qubits: usize, control: usize, target: usize) {
    let cbit = 1usize << (n_qubits - 1 - control);
    let tbit = 1usize << (n_qubits - 1 - target);
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

/// `G|ψ⟩` for the Pauli generator of a rotation axis on one qubit.
#[cfg(test)]
pub(crate) fn apply_generator_raw(amps: &mut [Complex64], n_qubits: usize, axis: Axis, qubit: usize) {
    let stride = 1usize << (n_qubits - 1 - qubit);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            match axis {
                Axis::Z => amps[i + stride] = -amps[i + stride],
                Axis::Y => {
                    // Y = [[0, −i], [i, 0]]
                    let a0 = amps[i];
                    let a1 = amps[i + stride];
                    amps[i] = Complex64::new(a1.im, -a1.re);
                    amps[i + stride] = Complex64::new(-a0.im, a0.re);
                }
            }
        }
        base += 2 * stride;
    }
}

/// `Im⟨λ|G_q|ψ⟩` without allocating.
pub(crate) fn generator_im_inner(
    lambda: &[Complex64],
    psi: &[Complex64],
    n_qubits: usize,
    axis: Axis,
    qubit: usize,
) -> f64 {
    let stride = 1usize << (n_qubits - 1 - qubit);
    let dim = psi.len();
    let mut acc = ZERO;
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let (l0, l1) = (lambda[i].conj(), lambda[i + stride].conj());
            let (p0, p1) = (psi[i], psi[i + stride]);
            match axis {
                Axis::Z => acc += l0 * p0 - l1 * p1,
                Axis::Y => {
                    acc += l0 * Complex64::new(p1.im, -p1.re) + l1 * Complex64::new(-p0.im, p0.re)
                }
            }
        }
        base += 2 * stride;
    }
    acc.im
}

/// Mixed state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_deviation();
        if herm > CONSTRUCTION_TOL {
            return Err(domain(format!("density matrix is not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > CONSTRUCTION_TOL || tr.im.abs() > CONSTRUCTION_TOL {
            return Err(domain(format!("density matrix trace is {tr}, expected 1")));
        }
        let (eigs, _) = matrix.hermitian_eigen();
        if eigs[0] < -1e-9 {
            return Err(domain(format!(
                "density matrix has negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn from_vector(state: &StateVector) -> Self {
        let d = state.dim();
        let a = state.amplitudes();
        let mut m = ComplexMatrix::zeros(d);
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] = a[r] * a[c].conj();
            }
        }
        Self { matrix: m }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self {
            matrix: ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)),
        }
    }

    /// Convex combination of states.
    pub fn mix(states: &[DensityMatrix], weights: &[f64]) -> Result<Self> {
        if states.is_empty() {
            return Err(domain("cannot mix an empty list of states"));
        }
        if states.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: weights.len(),
            });
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(domain("mixture weights must be non-negative and finite"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(domain(format!("mixture weights sum to {total}, expected 1")));
        }
        let d = states[0].dim();
        let mut acc = ComplexMatrix::zeros(d);
        for (s, &w) in states.iter().zip(weights) {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                });
            }
            acc = acc.add(&s.matrix.scale(Complex64::new(w, 0.0)));
        }
        Ok(Self { matrix: acc })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.matrix.n_qubits()
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `UρU†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(Self {
            matrix: u.matmul(&self.matrix).matmul(&u.adjoint()),
        })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.hermitian_eigen().0
    }

    pub fn is_maximally_mixed(&self, tol: f64) -> bool {
        self.matrix
            .max_abs_diff(&Self::maximally_mixed(self.n_qubits()).matrix)
            <= tol
    }
}

/// Applies a full-register gate to a pure state.
pub fn apply(gate: &ComplexMatrix, state: &StateVector) -> Result<StateVector> {
    if gate.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: gate.dim(),
        });
    }
    let amps = gate.matvec(state.amplitudes());
    let mut out = StateVector::from_raw(state.n_qubits(), amps);
    let norm = out.norm_sqr();
    if (norm - 1.0).abs() > CONSTRUCTION_TOL {
        return Err(Error::NotUnitary {
            deviation: (norm - 1.0).abs(),
        });
    }
    // Renormalize away accumulated rounding.
    let s = 1.0 / norm.sqrt();
    out.amps.iter_mut().for_each(|a| *a *= s);
    Ok(out)
}

pub fn density_from_vector(state: &StateVector) -> DensityMatrix {
    DensityMatrix::from_vector(state)
}

pub fn mix(states: &[DensityMatrix], weights: &[f64]) -> Result<DensityMatrix> {
    DensityMatrix::mix(states, weights)
}
