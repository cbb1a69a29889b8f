//! Fixed-point truncation of encoding angles.

use std::f64::consts::TAU;

use crate::error::{domain, Result};

/// Reduces each angle into `[0, 2π)` and truncates it to `q` fractional bits.
/// Returns the truncated angles and the largest truncation error.
pub fn quantize(x: &[f64], q: u32) -> (Vec<f64>, f64) {
    let scale = 2f64.powi(q as i32);
    let mut max_err: f64 = 0.0;
    let out = x
        .iter()
        .map(|&v| {
            let r = v.rem_euclid(TAU);
            let t = (r * scale).floor() / scale;
            max_err = max_err.max(r - t);
            t
        })
        .collect();
    (out, max_err)
}

/// `⌈log₂(3PLN/δ)⌉`, clamped at zero.
pub fn approx_qubits_needed(n: usize, l: usize, p: usize, delta: f64) -> Result<u32> {
    if !(delta > 0.0) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    let gates = (3 * n * l * p) as f64;
    if gates == 0.0 {
        return Ok(0);
    }
    Ok((gates / delta).log2().ceil().max(0.0) as u32)
}

/// `3·N·L·P·2^{−q}`.
pub fn approx_error_bound(n: usize, l: usize, p: usize, q: u32) -> f64 {
    (3 * n * l * p) as f64 * 2f64.powi(-(q as i32))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn quantize_examples() {
        let (t, e) = quantize(&[PI], 4);
        assert_eq!(t, vec![3.125]);
        assert!((e - (PI - 3.125)).abs() < 1e-15 && e <= 1.0 / 16.0);
        for q in [0, 3, 20] {
            assert_eq!(quantize(&[0.0], q).0, vec![0.0]);
        }
        let x = [0.1, 2.5, 6.2];
        let (t, _) = quantize(&x, 60);
        for (a, b) in t.iter().zip(x) {
            assert!((a - b).abs() < 1e-12);
        }
        // Negative angles are reduced first.
        let (t, _) = quantize(&[-PI], 4);
        assert_eq!(t, vec![3.125]);
    }

    #[test]
    fn qubit_count_examples() {
        assert_eq!(approx_qubits_needed(1, 1, 1, 3.0).unwrap(), 0);
        assert_eq!(approx_qubits_needed(1, 8, 8, 0.01).unwrap(), 15);
        assert!(approx_qubits_needed(1, 1, 1, 0.0).is_err());
        assert_eq!(approx_error_bound(2, 3, 1, 4) / approx_error_bound(2, 3, 1, 5), 2.0);
    }
}
