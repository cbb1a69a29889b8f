use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. `dim` must be a power of two.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(Error::Domain(format!("matrix dimension {dim} is not a power of two")));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const D: usize>(rows: [[Complex64; D]; D]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { dim: D, data }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits spanned, `log2(dim)`.
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * d..(k + 1) * d];
                let dst = &mut out.data[r * d..(r + 1) * d];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let d = a * b;
        let mut out = Self::zeros(d);
        for r1 in 0..a {
            for c1 in 0..a {
                let s = self.data[r1 * a + c1];
                if s == ZERO {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        out.data[(r1 * b + r2) * d + c1 * b + c2] = s * rhs.data[r2 * b + c2];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `Tr[self · rhs]` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex64 {
        let d = self.dim;
        let mut acc = ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += self.data[r * d + c] * rhs.data[c * d + r];
            }
        }
        acc
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                self.data[r * d..(r + 1) * d]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U U† − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.matmul(&self.adjoint())
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let d = m.nrows();
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[r * d + c] = m[(r, c)];
            }
        }
        out
    }

    /// Real eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let mut m = self.to_nalgebra();
        // Symmetrize to suppress round-off anti-Hermitian parts.
        let adj = m.adjoint();
        m = (m + adj) * Complex64::new(0.5, 0.0);
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim, self.dim, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Applies `f` to the spectrum of a Hermitian matrix.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let (values, vectors) = self.hermitian_eigen();
        let d = self.dim;
        let mut out = Self::zeros(d);
        for (k, &lam) in values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for r in 0..d {
                let vr = vectors[(r, k)] * w;
                for c in 0..d {
                    out.data[r * d + c] += vr * vectors[(c, k)].conj();
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(ComplexMatrix::from_vec(3, vec![ZERO; 9]).is_err());
        assert!(ComplexMatrix::from_vec(2, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn trace_product_matches_explicit_product() {
        let a = ComplexMatrix::from_rows([[c(1.0, 2.0), c(0.5, 0.0)], [c(-1.0, 0.3), c(2.0, -1.0)]]);
        let b = ComplexMatrix::from_rows([[c(0.0, 1.0), c(3.0, 0.0)], [c(1.0, 1.0), c(-2.0, 0.5)]]);
        assert!((a.trace_product(&b) - a.matmul(&b).trace()).norm() < 1e-14);
    }

    #[test]
    fn hermitian_map_square_root_squares_back() {
        let m = ComplexMatrix::from_rows([[c(0.7, 0.0), c(0.1, -0.2)], [c(0.1, 0.2), c(0.3, 0.0)]]);
        let s = m.hermitian_map(f64::sqrt);
        assert!(s.matmul(&s).max_abs_diff(&m) < 1e-12);
    }
}
