//! Distances and divergences between density matrices.

use super::basis::PauliVector;
use crate::error::{domain, Error, Result};
use crate::qsim::DensityMatrix;

/// Eigenvalues below this make a reference state count as singular.
pub const FULL_RANK_TOL: f64 = 1e-10;

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

fn require_full_rank(rho: &DensityMatrix) -> Result<()> {
    let min = rho.eigenvalues()[0];
    if min <= FULL_RANK_TOL {
        return Err(Error::Singular {
            eigenvalue: min,
            threshold: FULL_RANK_TOL,
        });
    }
    Ok(())
}

/// Petz–Rényi-2 divergence `log₂ Tr[ρ1² ρ2⁻¹]`.
pub fn d2(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1, rho2)?;
    if rho2.is_maximally_mixed(1e-14) {
        return Ok(rho1.n_qubits() as f64 + rho1.purity().log2());
    }
    require_full_rank(rho2)?;
    let inv = rho2.matrix().hermitian_map(|l| 1.0 / l);
    let sq = rho1.matrix().matmul(rho1.matrix());
    Ok(sq.trace_product(&inv).re.log2())
}

/// `D₂(ρ‖ρ_I) = log₂(βᵀβ)` straight from Pauli coefficients.
pub fn d2_to_mixed_from_pauli(beta: &PauliVector) -> f64 {
    beta.norm_sqr().log2()
}

/// `½‖ρ1 − ρ2‖₁`.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1, rho2)?;
    let diff = rho1.matrix().sub(rho2.matrix());
    let (eigs, _) = diff.hermitian_eigen();
    let t = 0.5 * eigs.iter().map(|e| e.abs()).sum::<f64>();
    Ok(t.clamp(0.0, 1.0))
}

/// Root fidelity `‖√ρ1 √ρ2‖₁`.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1, rho2)?;
    let s1 = rho1.matrix().hermitian_map(|l| l.max(0.0).sqrt());
    let inner = s1.matmul(rho2.matrix()).matmul(&s1);
    let (eigs, _) = inner.hermitian_eigen();
    let f: f64 = eigs.iter().map(|e| e.max(0.0).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `Tr[√ρ1 √ρ2]`.
pub fn affinity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1, rho2)?;
    let s1 = rho1.matrix().hermitian_map(|l| l.max(0.0).sqrt());
    let s2 = rho2.matrix().hermitian_map(|l| l.max(0.0).sqrt());
    Ok(s1.trace_product(&s2).re.clamp(0.0, 1.0))
}

/// Petz–Rényi divergence `(α−1)⁻¹ log₂ Tr[ρ1^α ρ2^{1−α}]`.
pub fn renyi(alpha: f64, rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(format!("Rényi order must be positive and finite, got {alpha}")));
    }
    if (alpha - 1.0).abs() < 1e-12 {
        return Err(domain(
            "Rényi order 1 is the quantum relative entropy, which is not provided",
        ));
    }
    check_dims(rho1, rho2)?;
    require_full_rank(rho2)?;
    let a = rho1.matrix().hermitian_map(|l| if l > 0.0 { l.powf(alpha) } else { 0.0 });
    let b = rho2.matrix().hermitian_map(|l| l.powf(1.0 - alpha));
    let q = a.trace_product(&b).re;
    Ok(q.log2() / (alpha - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{density_from_vector, mix, StateVector};

    fn ket(bit: usize) -> DensityMatrix {
        density_from_vector(&StateVector::basis(1, bit))
    }

    #[test]
    fn d2_examples() {
        let mixed = DensityMatrix::maximally_mixed(1);
        assert_eq!(d2(&mixed, &mixed).unwrap(), 0.0);
        for n in 1..=3 {
            let pure = density_from_vector(&StateVector::zero(n));
            let v = d2(&pure, &DensityMatrix::maximally_mixed(n)).unwrap();
            assert!((v - n as f64).abs() < 1e-12);
        }
        let m = mix(&[ket(0), ket(1)], &[0.75, 0.25]).unwrap();
        let v = d2(&m, &mixed).unwrap();
        assert!((v - 1.25f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn d2_general_route_matches_mixed_shortcut() {
        let m = mix(&[ket(0), ket(1)], &[0.6, 0.4]).unwrap();
        let reference = mix(&[ket(0), ket(1)], &[0.5, 0.5]).unwrap();
        let mut perturbed = reference.matrix().clone();
        perturbed[(0, 0)] += num_complex::Complex64::new(1e-13, 0.0);
        perturbed[(1, 1)] -= num_complex::Complex64::new(1e-13, 0.0);
        let general = d2(&m, &DensityMatrix::new(perturbed).unwrap()).unwrap();
        assert!((general - d2(&m, &reference).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn d2_rejects_singular_reference() {
        let err = d2(&DensityMatrix::maximally_mixed(1), &ket(0)).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
    }

    #[test]
    fn distance_examples() {
        let r = mix(&[ket(0), ket(1)], &[0.3, 0.7]).unwrap();
        assert!(trace_distance(&r, &r).unwrap() < 1e-15);
        assert!((trace_distance(&ket(0), &ket(1)).unwrap() - 1.0).abs() < 1e-15);
        let f = fidelity(&ket(0), &DensityMatrix::maximally_mixed(1)).unwrap();
        assert!((f - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-12);
        assert!((affinity(&r, &r).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn renyi_order_two_is_d2_and_order_one_rejected() {
        let a = mix(&[ket(0), ket(1)], &[0.8, 0.2]).unwrap();
        let b = mix(&[ket(0), ket(1)], &[0.4, 0.6]).unwrap();
        assert!((renyi(2.0, &a, &b).unwrap() - d2(&a, &b).unwrap()).abs() < 1e-10);
        assert!(renyi(1.0, &a, &b).is_err());
        assert!(renyi(0.0, &a, &b).is_err());
        // Commuting states: classical Rényi divergence by hand.
        let half = (0.8f64.sqrt() * 0.4f64.sqrt() + 0.2f64.sqrt() * 0.6f64.sqrt()).log2() / -0.5;
        assert!((renyi(0.5, &a, &b).unwrap() - half).abs() < 1e-12);
    }
}
