use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.005,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl Moments {
    pub fn zeros(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }
}

/// One bias-corrected Adam update at step `t ≥ 1`.
pub fn adam_step(
    theta: &[f64],
    grad: &[f64],
    moments: &Moments,
    t: u64,
    cfg: &AdamConfig,
) -> Result<(Vec<f64>, Moments)> {
    if t == 0 {
        return Err(domain("Adam step counter starts at 1"));
    }
    for len in [grad.len(), moments.m.len(), moments.v.len()] {
        if len != theta.len() {
            return Err(Error::DimensionMismatch {
                expected: theta.len(),
                found: len,
            });
        }
    }
    let c1 = 1.0 - cfg.beta1.powf(t as f64);
    let c2 = 1.0 - cfg.beta2.powf(t as f64);
    let mut out = Moments::zeros(theta.len());
    let mut next = theta.to_vec();
    for k in 0..theta.len() {
        let m = cfg.beta1 * moments.m[k] + (1.0 - cfg.beta1) * grad[k];
        let v = cfg.beta2 * moments.v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
        out.m[k] = m;
        out.v[k] = v;
        next[k] -= cfg.learning_rate * (m / c1) / ((v / c2).sqrt() + cfg.eps);
    }
    Ok((next, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_keeps_theta() {
        let cfg = AdamConfig::default();
        let (next, _) = adam_step(&[0.3, -1.0], &[0.0, 0.0], &Moments::zeros(2), 1, &cfg).unwrap();
        assert_eq!(next, vec![0.3, -1.0]);
    }

    #[test]
    fn first_step_is_signed_learning_rate() {
        let cfg = AdamConfig::default();
        let g = [2.0, -0.5, 1e-3];
        let (next, _) = adam_step(&[0.0; 3], &g, &Moments::zeros(3), 1, &cfg).unwrap();
        for (x, gk) in next.iter().zip(g) {
            let expected = -cfg.learning_rate * gk / (gk.abs() + cfg.eps);
            assert!((x - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn repeated_gradient_keeps_step_near_lr() {
        // With a constant gradient both corrected moments track g, so the
        // step stays at lr·g/(|g|+eps); a shrinking gradient shrinks it.
        let cfg = AdamConfig::default();
        let (t1, m1) = adam_step(&[0.0], &[1.0], &Moments::zeros(1), 1, &cfg).unwrap();
        let (t2, m2) = adam_step(&t1, &[1.0], &m1, 2, &cfg).unwrap();
        assert!(((t1[0] - t2[0]) - cfg.learning_rate).abs() < 1e-10);
        let (t3, _) = adam_step(&t2, &[0.1], &m2, 3, &cfg).unwrap();
        assert!(t2[0] - t3[0] < cfg.learning_rate);
        assert!(adam_step(&[0.0], &[1.0], &Moments::zeros(1), 0, &cfg).is_err());
    }
}
