//! Pauli-basis coefficients of states, with per-qubit ordering `{I, Z, X, Y}`
//! and qubit 0 as the most significant base-4 digit.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::qsim::matrix::ComplexMatrix;
use crate::qsim::DensityMatrix;

/// Letter codes within one base-4 digit.
pub const PAULI_I: usize = 0;
pub const PAULI_Z: usize = 1;
pub const PAULI_X: usize = 2;
pub const PAULI_Y: usize = 3;

/// Monomial form of a Pauli string: `P|c⟩ = phase(c)·|c ⊕ flip⟩`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PauliString {
    n_qubits: usize,
    index: usize,
    flip: usize,
}

impl PauliString {
    pub(crate) fn new(index: usize, n_qubits: usize) -> Self {
        let mut flip = 0;
        for q in 0..n_qubits {
            let letter = (index >> (2 * (n_qubits - 1 - q))) & 3;
            if letter == PAULI_X || letter == PAULI_Y {
                flip |= 1 << (n_qubits - 1 - q);
            }
        }
        Self {
            n_qubits,
            index,
            flip,
        }
    }

    pub(crate) fn flip(&self) -> usize {
        self.flip
    }

    /// Phase picked up by basis state `|col⟩`.
    pub(crate) fn phase(&self, col: usize) -> Complex64 {
        let n = self.n_qubits;
        let mut sign_flips = 0u32;
        let mut i_count = 0u32;
        for q in 0..n {
            let letter = (self.index >> (2 * (n - 1 - q))) & 3;
            let bit = (col >> (n - 1 - q)) & 1;
            match letter {
                PAULI_Z => sign_flips += bit as u32,
                PAULI_Y => {
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    i_count += 1;
                    sign_flips += bit as u32;
                }
                _ => {}
            }
        }
        let base = match i_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if sign_flips % 2 == 1 {
            -base
        } else {
            base
        }
    }

    pub(crate) fn matrix(&self) -> ComplexMatrix {
        let d = 1usize << self.n_qubits;
        let mut m = ComplexMatrix::zeros(d);
        for c in 0..d {
            m[(c ^ self.flip, c)] = self.phase(c);
        }
        m
    }

    /// `Tr[P · M]`.
    pub(crate) fn trace_against(&self, m: &ComplexMatrix) -> Complex64 {
        // (P M)_{rr} = P_{r, r⊕f} M_{r⊕f, r}, and P_{r, c} = phase(c) with r = c ⊕ f.
        let d = m.dim();
        (0..d)
            .map(|c| self.phase(c) * m[(c, c ^ self.flip)])
            .sum()
    }
}

/// Dense matrix of Pauli string number `index` on `n_qubits` qubits.
pub fn pauli_string_matrix(index: usize, n_qubits: usize) -> ComplexMatrix {
    PauliString::new(index, n_qubits).matrix()
}

/// `Tr[P_i M]` for every Pauli string, real parts.
pub(crate) fn pauli_coefficients(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.n_qubits();
    (0..1usize << (2 * n))
        .map(|i| PauliString::new(i, n).trace_against(m).re)
        .collect()
}

/// Pauli coefficients `α_i = Tr[ρ P_i]` of an `n_qubits`-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliVector {
    n_qubits: usize,
    coeffs: Vec<f64>,
}

impl PauliVector {
    pub fn new(n_qubits: usize, coeffs: Vec<f64>) -> Result<Self> {
        let len = 1usize << (2 * n_qubits);
        if coeffs.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: coeffs.len(),
            });
        }
        if (coeffs[0] - 1.0).abs() > 1e-9 {
            return Err(domain(format!(
                "identity coefficient must be 1 for a unit-trace state, got {}",
                coeffs[0]
            )));
        }
        Ok(Self { n_qubits, coeffs })
    }

    pub(crate) fn new_unchecked(n_qubits: usize, coeffs: Vec<f64>) -> Self {
        Self { n_qubits, coeffs }
    }

    /// `(1, 1, 0, 0)^{⊗n}`, the coefficients of `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Self {
        let len = 1usize << (2 * n_qubits);
        let coeffs = (0..len)
            .map(|i| {
                let only_iz = (0..n_qubits).all(|q| (i >> (2 * q)) & 3 <= PAULI_Z);
                if only_iz {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Self { n_qubits, coeffs }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `βᵀβ`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `Tr[ρ²] = 2^{−n}‖α‖²`.
    pub fn purity(&self) -> f64 {
        self.norm_sqr() / (1u64 << self.n_qubits) as f64
    }
}

pub fn to_pauli(rho: &DensityMatrix) -> PauliVector {
    PauliVector {
        n_qubits: rho.n_qubits(),
        coeffs: pauli_coefficients(rho.matrix()),
    }
}

/// `ρ = 2^{−n} Σ α_i P_i`.
pub fn from_pauli(v: &PauliVector) -> DensityMatrix {
    let n = v.n_qubits;
    let d = 1usize << n;
    let scale = 1.0 / d as f64;
    let mut m = ComplexMatrix::zeros(d);
    for (i, &a) in v.coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let p = PauliString::new(i, n);
        for c in 0..d {
            m[(c ^ p.flip(), c)] += p.phase(c) * (a * scale);
        }
    }
    // Drop round-off so the result is exactly Hermitian.
    let herm = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityMatrix::new_unchecked(herm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{density_from_vector, pauli_x, pauli_y, pauli_z, StateVector};

    #[test]
    fn single_qubit_strings_follow_izxy_order() {
        assert_eq!(pauli_string_matrix(0, 1), ComplexMatrix::identity(2));
        assert_eq!(pauli_string_matrix(1, 1), pauli_z());
        assert_eq!(pauli_string_matrix(2, 1), pauli_x());
        assert_eq!(pauli_string_matrix(3, 1), pauli_y());
    }

    #[test]
    fn multi_qubit_strings_are_kronecker_products() {
        let letters = [ComplexMatrix::identity(2), pauli_z(), pauli_x(), pauli_y()];
        for i in 0..64 {
            let (a, b, c) = (i >> 4, (i >> 2) & 3, i & 3);
            let expected = letters[a].kron(&letters[b]).kron(&letters[c]);
            assert_eq!(pauli_string_matrix(i, 3), expected, "string {i}");
        }
    }

    #[test]
    fn zero_state_coefficients() {
        let v = to_pauli(&density_from_vector(&StateVector::zero(1)));
        assert_eq!(v.coeffs(), &[1.0, 1.0, 0.0, 0.0]);
        let mixed = to_pauli(&DensityMatrix::maximally_mixed(1));
        assert_eq!(mixed.coeffs(), &[1.0, 0.0, 0.0, 0.0]);
        let two = to_pauli(&density_from_vector(&StateVector::zero(2)));
        assert_eq!(two, PauliVector::zero_state(2));
        let expected: Vec<f64> = [1.0, 1.0, 0.0, 0.0]
            .iter()
            .flat_map(|a| [1.0, 1.0, 0.0, 0.0].map(|b| a * b))
            .collect();
        assert_eq!(two.coeffs(), expected.as_slice());
    }

    #[test]
    fn rejects_wrong_identity_coefficient() {
        assert!(PauliVector::new(1, vec![0.5, 0.0, 0.0, 0.0]).is_err());
        assert!(PauliVector::new(1, vec![1.0, 0.0, 0.0]).is_err());
    }
}
