use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;

use super::basis::{pauli_coefficients, PauliString, PauliVector};
use crate::error::{domain, Error, Result};
use crate::qsim::ComplexMatrix;

/// Linear map on Pauli coefficients induced by a quantum channel.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    n_qubits: usize,
    entries: DMatrix<f64>,
}

impl TransferMatrix {
    pub fn identity(n_qubits: usize) -> Self {
        let d = 1usize << (2 * n_qubits);
        Self {
            n_qubits,
            entries: DMatrix::identity(d, d),
        }
    }

    /// Wraps raw entries; checks shape and the `1 ⊕ 𝓣` block structure.
    pub fn from_entries(n_qubits: usize, entries: DMatrix<f64>) -> Result<Self> {
        let d = 1usize << (2 * n_qubits);
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.nrows(),
            });
        }
        let t = Self { n_qubits, entries };
        let dev = t.block_deviation();
        if dev > 1e-9 {
            return Err(domain(format!(
                "transfer matrix lacks identity block structure (deviation {dev:.3e})"
            )));
        }
        Ok(t)
    }

    pub(crate) fn from_entries_unchecked(n_qubits: usize, entries: DMatrix<f64>) -> Self {
        Self { n_qubits, entries }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    /// `self · rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            entries: &self.entries * &rhs.entries,
        }
    }

    /// Transfer matrix of the tensor product of two channels.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self {
            n_qubits: self.n_qubits + rhs.n_qubits,
            entries: self.entries.kronecker(&rhs.entries),
        }
    }

    pub fn apply(&self, v: &PauliVector) -> Result<PauliVector> {
        if v.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: v.n_qubits(),
            });
        }
        let out = &self.entries * DVector::from_column_slice(v.coeffs());
        Ok(PauliVector::new_unchecked(self.n_qubits, out.as_slice().to_vec()))
    }

    /// Largest deviation of the first row and column from `e_0`.
    pub fn block_deviation(&self) -> f64 {
        let d = self.entries.nrows();
        let mut dev: f64 = (self.entries[(0, 0)] - 1.0).abs();
        for k in 1..d {
            dev = dev
                .max(self.entries[(0, k)].abs())
                .max(self.entries[(k, 0)].abs());
        }
        dev
    }

    /// `‖HᵀH − I‖_max`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let d = self.entries.nrows();
        let g = self.entries.transpose() * &self.entries;
        (g - DMatrix::<f64>::identity(d, d)).amax()
    }

    /// The lower-right block acting on the non-identity coefficients.
    pub fn lower_block(&self) -> DMatrix<f64> {
        let d = self.entries.nrows();
        self.entries.view((1, 1), (d - 1, d - 1)).into_owned()
    }
}

/// Builds `H_ij = 2^{−N} Tr[P_i U Q_j U†]` column by column.
pub fn transfer_of_unitary(u: &ComplexMatrix) -> Result<TransferMatrix> {
    let dev = u.unitarity_deviation();
    if dev > 1e-8 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let n = u.n_qubits();
    let d4 = 1usize << (2 * n);
    let scale = 1.0 / u.dim() as f64;
    let u_adj = u.adjoint();
    let mut entries = DMatrix::zeros(d4, d4);
    for j in 0..d4 {
        let q = PauliString::new(j, n);
        // U·Q has columns of U permuted and phased.
        let dim = u.dim();
        let mut uq = ComplexMatrix::zeros(dim);
        for c in 0..dim {
            let ph: Complex64 = q.phase(c);
            let src = c ^ q.flip();
            for r in 0..dim {
                uq[(r, c)] = u[(r, src)] * ph;
            }
        }
        let conj = uq.matmul(&u_adj);
        for (i, v) in pauli_coefficients(&conj).into_iter().enumerate() {
            entries[(i, j)] = v * scale;
        }
    }
    Ok(TransferMatrix::from_entries_unchecked(n, entries))
}

/// `(e^{−σ²/2} cos μ, e^{−σ²/2} sin μ)`, the Gaussian mean of `(cos x, sin x)`.
pub fn expected_cos_sin(mu: f64, sigma2: f64) -> (f64, f64) {
    let a = (-sigma2 / 2.0).exp();
    let (s, c) = mu.sin_cos();
    (a * c, a * s)
}

/// Closed-form `E[T(x)]` of one encoding gate with independent Gaussian angles.
pub fn expected_transfer_single(mu: [f64; 3], sigma2: [f64; 3]) -> Result<TransferMatrix> {
    if let Some(v) = sigma2.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
        return Err(domain(format!("variances must be positive and finite, got {v}")));
    }
    let (c1, s1) = expected_cos_sin(mu[0], sigma2[0]);
    let (c2, s2) = expected_cos_sin(mu[1], sigma2[1]);
    let (c3, s3) = expected_cos_sin(mu[2], sigma2[2]);

    // t_ab: input component a to output component b.
    let t_zz = c2;
    let t_zx = s2 * c3;
    let t_zy = s2 * s3;
    let t_xz = -s2 * c1;
    let t_xx = c2 * c1 * c3 - s1 * s3;
    let t_xy = c2 * c1 * s3 + s1 * c3;
    let t_yz = s2 * s1;
    let t_yx = -c2 * s1 * c3 - c1 * s3;
    let t_yy = -c2 * s1 * s3 + c1 * c3;

    #[rustfmt::skip]
    let entries = DMatrix::from_row_slice(4, 4, &[
        1.0, 0.0,  0.0,  0.0,
        0.0, t_zz, t_xz, t_yz,
        0.0, t_zx, t_xx, t_yx,
        0.0, t_zy, t_xy, t_yy,
    ]);
    Ok(TransferMatrix::from_entries_unchecked(1, entries))
}

/// Largest eigenvalue of `𝓣ᵀ𝓣` for the 3×3 block of a single-qubit transfer matrix.
pub fn contraction_eigenvalue(t: &TransferMatrix) -> Result<f64> {
    if t.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: t.n_qubits(),
        });
    }
    let b = t.lower_block();
    let block = Matrix3::from_fn(|r, c| b[(r, c)]);
    let gram = block.transpose() * block;
    let eig = gram.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::pauli::basis::to_pauli;
    use crate::qsim::{density_from_vector, r3, ry, rz, StateVector};

    fn rot_block(x: f64, i: usize, j: usize) -> DMatrix<f64> {
        let mut m = DMatrix::identity(4, 4);
        let (s, c) = x.sin_cos();
        m[(i, i)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        m[(j, j)] = c;
        m
    }

    #[test]
    fn rz_and_ry_transfer_matrices() {
        for k in 0..13 {
            let x = -PI + 0.5 * k as f64;
            let tz = transfer_of_unitary(&rz(x).unwrap()).unwrap();
            assert!((tz.entries() - rot_block(x, 2, 3)).amax() < 1e-12);
            let ty = transfer_of_unitary(&ry(x).unwrap()).unwrap();
            // Rotation in the (Z, X) block: Z → cos·Z + sin·X.
            assert!((ty.entries() - rot_block(x, 1, 2)).amax() < 1e-12);
        }
        let id = transfer_of_unitary(&ComplexMatrix::identity(4)).unwrap();
        assert!((id.entries() - DMatrix::identity(16, 16)).amax() < 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = ComplexMatrix::identity(2).scale(Complex64::new(1.1, 0.0));
        assert!(matches!(transfer_of_unitary(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn transfer_matches_conjugation_on_a_state() {
        let u = r3(0.3, -1.1, 2.0).unwrap();
        let mut psi = StateVector::zero(1);
        psi.apply_single(&crate::qsim::gates::r3_entries([1.0, 0.4, -0.2]), 0);
        let rho = density_from_vector(&psi);
        let out = crate::qsim::apply(&u, &psi).unwrap();
        let lhs = to_pauli(&density_from_vector(&out));
        let rhs = transfer_of_unitary(&u).unwrap().apply(&to_pauli(&rho)).unwrap();
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_equals_product_of_expected_rotations() {
        let cases = [
            ([0.0, 0.0, 0.0], [0.8, 0.8, 0.8]),
            ([0.3, -1.2, 2.2], [0.1, 0.5, 1.7]),
            ([PI, 0.5 * PI, -0.7], [2.0, 0.05, 0.3]),
        ];
        for (mu, s2) in cases {
            let a: Vec<f64> = s2.iter().map(|v: &f64| (-v / 2.0).exp()).collect();
            let ez = |k: usize| rot_block(mu[k], 2, 3).component_mul(&scaled_mask(a[k], 2, 3));
            let ey = rot_block(mu[1], 1, 2).component_mul(&scaled_mask(a[1], 1, 2));
            let product = ez(2) * ey * ez(0);
            let closed = expected_transfer_single(mu, s2).unwrap();
            assert!((closed.entries() - product).amax() < 1e-12);
        }
    }

    /// Multiplies the 2×2 rotation block of a 4×4 matrix by `a`.
    fn scaled_mask(a: f64, i: usize, j: usize) -> DMatrix<f64> {
        let mut m = DMatrix::from_element(4, 4, 1.0);
        for (r, c) in [(i, i), (i, j), (j, i), (j, j)] {
            m[(r, c)] = a;
        }
        m
    }

    #[test]
    fn zero_mean_closed_form_is_diagonal() {
        let s: f64 = 0.8;
        let t = expected_transfer_single([0.0; 3], [s; 3]).unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![
            1.0,
            (-s / 2.0).exp(),
            (-1.5 * s).exp(),
            (-s).exp(),
        ]));
        assert!((t.entries() - expected).amax() < 1e-15);
    }

    #[test]
    fn small_variance_recovers_deterministic_gate() {
        let mu = [0.4, 1.9, -2.3];
        let t = expected_transfer_single(mu, [1e-14; 3]).unwrap();
        let exact = transfer_of_unitary(&r3(mu[0], mu[1], mu[2]).unwrap()).unwrap();
        assert!((t.entries() - exact.entries()).amax() < 1e-12);
        assert!((contraction_eigenvalue(&t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_variance_rejected() {
        assert!(expected_transfer_single([0.0; 3], [0.8, 0.0, 0.8]).is_err());
        assert!(expected_transfer_single([0.0; 3], [0.8, -1.0, 0.8]).is_err());
    }

    #[test]
    fn contraction_examples() {
        for mu in [[0.0, 0.0, 0.0], [1.0, -2.0, 0.5], [3.0, 1.5, -0.1]] {
            let t = expected_transfer_single(mu, [0.8; 3]).unwrap();
            assert!(contraction_eigenvalue(&t).unwrap() <= (-0.8f64).exp() + 1e-9);
        }
        let t = expected_transfer_single([0.2, 0.3, 0.4], [200.0; 3]).unwrap();
        assert!(contraction_eigenvalue(&t).unwrap() < 1e-40);
    }

    #[test]
    fn expected_cos_sin_examples() {
        assert_eq!(expected_cos_sin(0.0, 0.0), (1.0, 0.0));
        let (c, s) = expected_cos_sin(PI / 2.0, 0.6);
        assert!(c.abs() < 1e-16 && (s - (-0.3f64).exp()).abs() < 1e-15);
    }
}
