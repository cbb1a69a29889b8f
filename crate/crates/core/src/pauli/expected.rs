//! Expected encoded states under Gaussian data, analytically (single
//! repetition) and by Monte Carlo.

use num_complex::Complex64;
use rayon::prelude::*;

use super::basis::PauliVector;
use super::transfer::{expected_transfer_single, transfer_of_unitary, TransferMatrix};
use crate::data::rng::{Rng, Stream};
use crate::error::{domain, Error, Result};
use crate::model::circuit::{CircuitSpec, Entangler, ParameterTensor, Program};
use crate::qsim::{cnot_ring, embed, r3, ComplexMatrix, DensityMatrix, Observable};

/// Monte-Carlo draws per independently seeded chunk.
pub const MC_CHUNK: usize = 1024;

/// Largest register for which dense transfer matrices are built.
pub const MAX_ANALYTIC_QUBITS: usize = 5;

/// Independent Gaussian data `x_k ~ N(μ_k, σ²_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec {
    means: Vec<f64>,
    variances: Vec<f64>,
    sigma_floor: f64,
}

impl GaussianSpec {
    pub fn new(means: Vec<f64>, variances: Vec<f64>, sigma_floor: f64) -> Result<Self> {
        if means.len() != variances.len() {
            return Err(Error::DimensionMismatch {
                expected: means.len(),
                found: variances.len(),
            });
        }
        if !(sigma_floor > 0.0) {
            return Err(domain(format!("variance floor must be positive, got {sigma_floor}")));
        }
        if let Some(v) = variances.iter().find(|&&v| !(v >= sigma_floor) || !v.is_finite()) {
            return Err(domain(format!(
                "variance {v} is below the floor {sigma_floor}"
            )));
        }
        if let Some(m) = means.iter().find(|m| !m.is_finite()) {
            return Err(domain(format!("means must be finite, got {m}")));
        }
        Ok(Self {
            means,
            variances,
            sigma_floor,
        })
    }

    /// Common variance `σ²` on every coordinate.
    pub fn isotropic(means: Vec<f64>, sigma2: f64) -> Result<Self> {
        let variances = vec![sigma2; means.len()];
        Self::new(means, variances, sigma2)
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn sigma_floor(&self) -> f64 {
        self.sigma_floor
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        self.means
            .iter()
            .zip(&self.variances)
            .map(|(&m, &v)| rng.normal(m, v))
            .collect()
    }
}

fn check_inputs(spec: &CircuitSpec, gauss: &GaussianSpec, theta: &ParameterTensor) -> Result<()> {
    spec.validate()?;
    if gauss.dim() != spec.data_dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.data_dim(),
            found: gauss.dim(),
        });
    }
    theta.check_spec(spec)?;
    theta.validate()
}

/// `β = H_L E[T_L] ⋯ H_1 E[T_1] α` for a single-repetition circuit.
pub fn expected_state_analytic(
    spec: &CircuitSpec,
    gauss: &GaussianSpec,
    theta: &ParameterTensor,
) -> Result<PauliVector> {
    check_inputs(spec, gauss, theta)?;
    if spec.repetitions != 1 {
        return Err(domain(format!(
            "analytic expected state requires one repetition, got {}",
            spec.repetitions
        )));
    }
    let n = spec.n_qubits;
    if n > MAX_ANALYTIC_QUBITS {
        return Err(domain(format!(
            "analytic expected state supports at most {MAX_ANALYTIC_QUBITS} qubits, got {n}"
        )));
    }
    let ring = if spec.entangler == Entangler::RingCnot && n >= 2 {
        Some(cnot_ring(n)?)
    } else {
        None
    };
    let mut beta = PauliVector::zero_state(n);
    for l in 0..spec.total_layers {
        if l < spec.encoding_layers {
            let mut layer: Option<TransferMatrix> = None;
            for q in 0..n {
                let k = spec.feature_index(l, q, 0);
                let mu = [gauss.means[k], gauss.means[k + 1], gauss.means[k + 2]];
                let s2 = [gauss.variances[k], gauss.variances[k + 1], gauss.variances[k + 2]];
                let t = expected_transfer_single(mu, s2)?;
                layer = Some(match layer {
                    None => t,
                    Some(acc) => acc.kron(&t),
                });
            }
            if let Some(t) = layer {
                beta = t.apply(&beta)?;
            }
        }
        let mut u = ComplexMatrix::identity(1 << n);
        for q in 0..n {
            let t = theta.get(0, l, q);
            u = embed(&r3(t[0], t[1], t[2])?, q, n)?.matmul(&u);
        }
        if let Some(r) = &ring {
            u = r.matmul(&u);
        }
        beta = transfer_of_unitary(&u)?.apply(&beta)?;
    }
    Ok(beta)
}

fn chunk_bounds(samples: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    let n_chunks = samples.div_ceil(MC_CHUNK);
    (0..n_chunks).into_par_iter().map(move |c| {
        let len = MC_CHUNK.min(samples - c * MC_CHUNK);
        (c as u64, len)
    })
}

fn add_projector(acc: &mut ComplexMatrix, amps: &[Complex64]) {
    let d = amps.len();
    for r in 0..d {
        let a = amps[r];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for c in 0..d {
            acc[(r, c)] += a * amps[c].conj();
        }
    }
}

fn finish_average(parts: Vec<ComplexMatrix>, count: usize) -> DensityMatrix {
    let mut total = parts
        .into_iter()
        .reduce(|a, b| a.add(&b))
        .expect("at least one chunk");
    total = total.scale(Complex64::new(1.0 / count as f64, 0.0));
    let herm = total.add(&total.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityMatrix::new_unchecked(herm)
}

/// Equal-weight mixture of encoded states over i.i.d. Gaussian draws.
///
/// Draws are split into fixed chunks seeded from `(seed, chunk)` and summed in
/// chunk order, so the result does not depend on the worker count.
pub fn expected_state_monte_carlo(
    spec: &CircuitSpec,
    gauss: &GaussianSpec,
    theta: &ParameterTensor,
    samples: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    check_inputs(spec, gauss, theta)?;
    if samples == 0 {
        return Err(domain("Monte-Carlo average needs at least one sample"));
    }
    let program = Program::new(spec)?;
    let dim = 1usize << spec.n_qubits;
    let parts: Vec<ComplexMatrix> = chunk_bounds(samples)
        .map(|(chunk, len)| {
            let mut rng = Rng::derived(seed, Stream::MonteCarlo, chunk);
            let mut acc = ComplexMatrix::zeros(dim);
            for _ in 0..len {
                let x = gauss.sample(&mut rng);
                add_projector(&mut acc, program.state(&x, theta.values()).amplitudes());
            }
            acc
        })
        .collect();
    Ok(finish_average(parts, samples))
}

/// `Tr[H ρ̄_M]` computed as the sample mean of `⟨H⟩`, using the same draws as
/// [`expected_state_monte_carlo`] with equal arguments.
pub fn expected_observable_monte_carlo(
    spec: &CircuitSpec,
    gauss: &GaussianSpec,
    theta: &ParameterTensor,
    obs: &Observable,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    check_inputs(spec, gauss, theta)?;
    if samples == 0 {
        return Err(domain("Monte-Carlo average needs at least one sample"));
    }
    if obs.n_qubits() != spec.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits,
            found: obs.n_qubits(),
        });
    }
    let program = Program::new(spec)?;
    let sums: Vec<f64> = chunk_bounds(samples)
        .map(|(chunk, len)| {
            let mut rng = Rng::derived(seed, Stream::MonteCarlo, chunk);
            (0..len)
                .map(|_| {
                    let x = gauss.sample(&mut rng);
                    program.expectation(&x, theta.values(), obs)
                })
                .sum()
        })
        .collect();
    Ok(sums.iter().sum::<f64>() / samples as f64)
}

/// Average encoded state over given data vectors.
pub fn empirical_state<'a>(
    spec: &CircuitSpec,
    theta: &ParameterTensor,
    data: impl IntoIterator<Item = &'a [f64]>,
) -> Result<DensityMatrix> {
    theta.check_spec(spec)?;
    let program = Program::new(spec)?;
    let mut acc = ComplexMatrix::zeros(1 << spec.n_qubits);
    let mut count = 0usize;
    for x in data {
        spec.check_data(x)?;
        add_projector(&mut acc, program.state(x, theta.values()).amplitudes());
        count += 1;
    }
    if count == 0 {
        return Err(domain("cannot average an empty set of states"));
    }
    Ok(finish_average(vec![acc], count))
}
