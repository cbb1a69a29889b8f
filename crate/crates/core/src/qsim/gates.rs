//! Gate constructors. Qubit 0 is the leftmost tensor factor, i.e. the most
//! significant bit of a basis index.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, I, ONE, ZERO};
use crate::error::{domain, Error, Result};

/// Rotation axis of a single-qubit Pauli rotation `exp(-i·angle·P/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

pub type Gate2 = [[Complex64; 2]; 2];

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

fn check_angle(angle: f64) -> Result<()> {
    if angle.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("rotation angle must be finite, got {angle}")))
    }
}

/// Raw 2×2 entries of a Pauli rotation; the caller guarantees a finite angle.
pub(crate) fn rotation2(axis: Axis, angle: f64) -> Gate2 {
    let (s, c) = (angle / 2.0).sin_cos();
    match axis {
        Axis::Z => [
            [Complex64::new(c, -s), ZERO],
            [ZERO, Complex64::new(c, s)],
        ],
        Axis::Y => [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ],
    }
}

pub(crate) fn mul2(a: &Gate2, b: &Gate2) -> Gate2 {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Raw entries of `rz(φ3)·ry(φ2)·rz(φ1)`.
pub(crate) fn r3_entries(phi: [f64; 3]) -> Gate2 {
    let a = rotation2(Axis::Z, phi[0]);
    let b = rotation2(Axis::Y, phi[1]);
    let c = rotation2(Axis::Z, phi[2]);
    mul2(&c, &mul2(&b, &a))
}

/// `exp(-i·angle·Z/2)`.
pub fn rz(angle: f64) -> Result<ComplexMatrix> {
    check_angle(angle)?;
    Ok(ComplexMatrix::from_rows(rotation2(Axis::Z, angle)))
}

/// `exp(-i·angle·Y/2)`.
pub fn ry(angle: f64) -> Result<ComplexMatrix> {
    check_angle(angle)?;
    Ok(ComplexMatrix::from_rows(rotation2(Axis::Y, angle)))
}

/// General single-qubit gate `rz(φ3)·ry(φ2)·rz(φ1)`.
pub fn r3(phi1: f64, phi2: f64, phi3: f64) -> Result<ComplexMatrix> {
    for a in [phi1, phi2, phi3] {
        check_angle(a)?;
    }
    Ok(ComplexMatrix::from_rows(r3_entries([phi1, phi2, phi3])))
}

/// `I^{⊗qubit} ⊗ gate ⊗ I^{⊗(n_qubits−qubit−1)}`.
pub fn embed(gate: &ComplexMatrix, qubit: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if gate.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: gate.dim(),
        });
    }
    if qubit >= n_qubits {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            len: n_qubits,
        });
    }
    let left = ComplexMatrix::identity(1 << qubit);
    let right = ComplexMatrix::identity(1 << (n_qubits - qubit - 1));
    Ok(left.kron(gate).kron(&right))
}

/// Full-register CNOT as a permutation matrix.
pub fn cnot(control: usize, target: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    for q in [control, target] {
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: q,
                len: n_qubits,
            });
        }
    }
    if control == target {
        return Err(domain("CNOT control and target must differ"));
    }
    let dim = 1usize << n_qubits;
    let cbit = 1usize << (n_qubits - 1 - control);
    let tbit = 1usize << (n_qubits - 1 - target);
    let mut m = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        let row = if col & cbit != 0 { col ^ tbit } else { col };
        m[(row, col)] = ONE;
    }
    Ok(m)
}

/// CNOT(i → (i+1) mod n) for i = 0..n−1, applied in ascending order.
pub fn cnot_ring(n_qubits: usize) -> Result<ComplexMatrix> {
    if n_qubits < 2 {
        return Err(domain(format!(
            "CNOT ring needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let mut u = ComplexMatrix::identity(1 << n_qubits);
    for i in 0..n_qubits {
        let g = cnot(i, (i + 1) % n_qubits, n_qubits)?;
        u = g.matmul(&u);
    }
    Ok(u)
}
