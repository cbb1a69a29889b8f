use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gates::{embed, pauli_z, Gate2};
use super::matrix::{ComplexMatrix, ONE, ZERO};
use super::state::{DensityMatrix, StateVector};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    /// `|0⟩⟨0|` on the first qubit.
    H0,
    /// `|1⟩⟨1|` on the first qubit.
    H1,
    /// `Z ⊗ Z ⊗ … ⊗ Z`.
    TensorZ,
    Custom,
}

/// Hermitian observable with spectrum inside `[−1, 1]`.
#[derive(Clone, Debug)]
pub struct Observable {
    kind: ObservableKind,
    n_qubits: usize,
    matrix: ComplexMatrix,
}

fn projector(bit: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(bit, bit)] = ONE;
    m
}

impl Observable {
    pub fn h0(n_qubits: usize) -> Self {
        Self {
            kind: ObservableKind::H0,
            n_qubits,
            matrix: embed(&projector(0), 0, n_qubits).expect("n_qubits ≥ 1"),
        }
    }

    pub fn h1(n_qubits: usize) -> Self {
        Self {
            kind: ObservableKind::H1,
            n_qubits,
            matrix: embed(&projector(1), 0, n_qubits).expect("n_qubits ≥ 1"),
        }
    }

    /// `H_y` for a class label.
    pub fn for_label(label: usize, n_qubits: usize) -> Self {
        if label == 0 {
            Self::h0(n_qubits)
        } else {
            Self::h1(n_qubits)
        }
    }

    pub fn tensor_z(n_qubits: usize) -> Self {
        let mut m = ComplexMatrix::identity(1);
        for _ in 0..n_qubits {
            m = m.kron(&pauli_z());
        }
        Self {
            kind: ObservableKind::TensorZ,
            n_qubits,
            matrix: m,
        }
    }

    pub fn custom(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > 1e-10 {
            return Err(domain(format!("observable is not Hermitian (deviation {dev:.3e})")));
        }
        let (eigs, _) = matrix.hermitian_eigen();
        let (lo, hi) = (eigs[0], eigs[eigs.len() - 1]);
        if lo < -1.0 - 1e-9 || hi > 1.0 + 1e-9 {
            return Err(domain(format!(
                "observable spectrum [{lo}, {hi}] exceeds [−1, 1]"
            )));
        }
        Ok(Self {
            kind: ObservableKind::Custom,
            n_qubits: matrix.n_qubits(),
            matrix,
        })
    }

    pub fn kind(&self) -> ObservableKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Single-qubit factors when the observable is a tensor product; `None`
    /// entries are identities.
    pub(crate) fn product_factors(&self) -> Option<Vec<Option<Gate2>>> {
        let proj = |b: usize| {
            let mut g = [[ZERO; 2]; 2];
            g[b][b] = ONE;
            g
        };
        let z: Gate2 = [[ONE, ZERO], [ZERO, -ONE]];
        match self.kind {
            ObservableKind::H0 | ObservableKind::H1 => {
                let bit = usize::from(self.kind == ObservableKind::H1);
                let mut f = vec![None; self.n_qubits];
                f[0] = Some(proj(bit));
                Some(f)
            }
            ObservableKind::TensorZ => Some(vec![Some(z); self.n_qubits]),
            ObservableKind::Custom => None,
        }
    }

    /// `H|ψ⟩` as raw amplitudes.
    pub(crate) fn apply_raw(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let dim = amps.len();
        match self.kind {
            ObservableKind::H0 | ObservableKind::H1 => {
                let half = dim / 2;
                let keep_upper = self.kind == ObservableKind::H0;
                amps.iter()
                    .enumerate()
                    .map(|(i, &a)| if (i < half) == keep_upper { a } else { ZERO })
                    .collect()
            }
            ObservableKind::TensorZ => amps
                .iter()
                .enumerate()
                .map(|(i, &a)| if i.count_ones() % 2 == 0 { a } else { -a })
                .collect(),
            ObservableKind::Custom => self.matrix.matvec(amps),
        }
    }

    pub(crate) fn expectation_raw(&self, amps: &[Complex64]) -> f64 {
        let dim = amps.len();
        match self.kind {
            ObservableKind::H0 => amps[..dim / 2].iter().map(|a| a.norm_sqr()).sum(),
            ObservableKind::H1 => amps[dim / 2..].iter().map(|a| a.norm_sqr()).sum(),
            ObservableKind::TensorZ => amps
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let p = a.norm_sqr();
                    if i.count_ones() % 2 == 0 {
                        p
                    } else {
                        -p
                    }
                })
                .sum(),
            ObservableKind::Custom => {
                let h = self.matrix.matvec(amps);
                amps.iter().zip(&h).map(|(a, b)| (a.conj() * b).re).sum()
            }
        }
    }

    /// `Tr[H ρ_I]`.
    pub fn maximally_mixed_value(&self) -> f64 {
        self.matrix.trace().re / self.matrix.dim() as f64
    }
}

/// Anything whose expectation value against an observable is defined.
pub trait Measurable {
    fn expectation_of(&self, obs: &Observable) -> Result<f64>;
}

impl Measurable for StateVector {
    fn expectation_of(&self, obs: &Observable) -> Result<f64> {
        if obs.matrix.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: obs.matrix.dim(),
            });
        }
        Ok(obs.expectation_raw(self.amplitudes()))
    }
}

impl Measurable for DensityMatrix {
    fn expectation_of(&self, obs: &Observable) -> Result<f64> {
        if obs.matrix.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: obs.matrix.dim(),
            });
        }
        Ok(obs.matrix.trace_product(self.matrix()).re)
    }
}

/// `Tr[H ρ]` (or `⟨ψ|H|ψ⟩` for pure states).
pub fn expectation(obs: &Observable, state: &impl Measurable) -> Result<f64> {
    state.expectation_of(obs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::gates::ry;
    use crate::qsim::state::{apply, density_from_vector};

    #[test]
    fn h0_on_zero_is_one() {
        let v = expectation(&Observable::h0(1), &StateVector::zero(1)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn tensor_z_on_maximally_mixed_vanishes() {
        for n in 1..=4 {
            let v = expectation(&Observable::tensor_z(n), &DensityMatrix::maximally_mixed(n)).unwrap();
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn h0_after_ry_is_cos_squared() {
        for k in 0..20 {
            let theta = -3.0 + 0.31 * k as f64;
            let psi = apply(&ry(theta).unwrap(), &StateVector::zero(1)).unwrap();
            let expected = (theta / 2.0).cos().powi(2);
            assert!((expectation(&Observable::h0(1), &psi).unwrap() - expected).abs() < 1e-12);
            let rho = density_from_vector(&psi);
            assert!((expectation(&Observable::h0(1), &rho).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn fast_paths_match_matrix_route() {
        let mut psi = StateVector::zero(3);
        for q in 0..3 {
            psi.apply_single(&crate::qsim::gates::r3_entries([0.4 * q as f64, 1.0, 0.2]), q);
        }
        psi.apply_cnot(0, 2);
        let rho = density_from_vector(&psi);
        for obs in [Observable::h0(3), Observable::h1(3), Observable::tensor_z(3)] {
            let fast = expectation(&obs, &psi).unwrap();
            let slow = expectation(&obs, &rho).unwrap();
            assert!((fast - slow).abs() < 1e-12);
            let applied = obs.apply_raw(psi.amplitudes());
            let reference = obs.matrix().matvec(psi.amplitudes());
            assert_eq!(applied, reference);
        }
    }

    #[test]
    fn custom_rejects_out_of_range_spectrum() {
        let m = ComplexMatrix::identity(2).scale(Complex64::new(2.0, 0.0));
        assert!(Observable::custom(m).is_err());
        assert!(Observable::custom(pauli_z()).is_ok());
    }

    #[test]
    fn maximally_mixed_values() {
        assert_eq!(Observable::h0(3).maximally_mixed_value(), 0.5);
        assert_eq!(Observable::tensor_z(2).maximally_mixed_value(), 0.0);
    }
}
