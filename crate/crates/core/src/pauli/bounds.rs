//! Closed-form divergence bounds and the layer count that guarantees them.

use std::f64::consts::LN_2;

use crate::error::{domain, Result};

fn check_variance(sigma2: f64) -> Result<()> {
    if sigma2 > 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("variance must be positive and finite, got {sigma2}")))
    }
}

/// `log₂(1 + (2^N − 1)·e^{−Lσ²})`, the divergence ceiling of the expected
/// encoded state after `L` Gaussian encoding layers.
pub fn divergence_bound(n_qubits: usize, layers: usize, sigma2: f64) -> Result<f64> {
    check_variance(sigma2)?;
    let excess = (2f64.powi(n_qubits as i32) - 1.0) * (-(layers as f64) * sigma2).exp();
    Ok(excess.ln_1p() / LN_2)
}

/// Smallest `L ≥ (1/σ²)[(N+2) ln 2 + 2 ln(1/ε)]`.
pub fn layer_threshold(n_qubits: usize, sigma2: f64, eps: f64) -> Result<usize> {
    check_variance(sigma2)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let value = ((n_qubits as f64 + 2.0) * LN_2 + 2.0 * (1.0 / eps).ln()) / sigma2;
    Ok(value.ceil() as usize)
}

/// Trace-distance ceiling `√(1 − 2^{−D₂})` implied by a Rényi-2 divergence.
pub fn td_from_d2_bound(d2_value: f64) -> Result<f64> {
    if d2_value.is_nan() || d2_value < -1e-12 {
        return Err(domain(format!("divergence must be nonnegative, got {d2_value}")));
    }
    let d = d2_value.max(0.0);
    Ok((1.0 - (-d).exp2()).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_bound_examples() {
        for n in 1..=6 {
            assert!((divergence_bound(n, 0, 0.8).unwrap() - n as f64).abs() < 1e-12);
        }
        assert!(divergence_bound(3, 10_000, 0.8).unwrap() < 1e-300);
        // log2(1 + e^{-6.4}) evaluated independently.
        let expected = (1.0 + (-6.4f64).exp()).ln() / 2f64.ln();
        let v = divergence_bound(1, 8, 0.8).unwrap();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 2.3951e-3).abs() < 1e-7);
        assert!(divergence_bound(1, 1, 0.0).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(layer_threshold(1, 0.8, 0.1).unwrap(), 9);
        let near_one = layer_threshold(2, 0.8, 1.0 - 1e-12).unwrap();
        assert_eq!(near_one, (4.0 * LN_2 / 0.8f64).ceil() as usize);
        let mut last = 0;
        for k in 1..30 {
            let t = layer_threshold(2, 0.8, 0.5f64.powi(k)).unwrap();
            assert!(t >= last);
            last = t;
        }
        assert!(layer_threshold(1, 0.8, 0.0).is_err());
        assert!(layer_threshold(1, 0.8, 1.0).is_err());
    }

    #[test]
    fn td_bound_examples() {
        assert_eq!(td_from_d2_bound(0.0).unwrap(), 0.0);
        assert!((td_from_d2_bound(1.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(td_from_d2_bound(-0.5).is_err());
    }
}
