use proptest::prelude::*;

use reupload_lab::data::{quantize, Task};
use reupload_lab::model::{decide, CircuitSpec, Entangler, Hypothesis, ParameterTensor};
use reupload_lab::pauli::{
    contraction_eigenvalue, d2, expected_state_analytic, expected_transfer_single, fidelity, renyi,
    td_from_d2_bound, divergence_bound, to_pauli, trace_distance, transfer_of_unitary, d2_to_mixed_from_pauli,
    GaussianSpec,
};
use reupload_lab::qsim::{cnot_ring, embed, r3, ComplexMatrix, DensityMatrix, StateVector};

const ANGLE: std::ops::Range<f64> = -6.3..6.3;

/// Two brickwork layers of `r3` plus a CNOT ring; `angles` holds 6N values.
fn unitary(n: usize, angles: &[f64]) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(1 << n);
    for layer in 0..2 {
        for q in 0..n {
            let a = &angles[(layer * n + q) * 3..][..3];
            let g = embed(&r3(a[0], a[1], a[2]).unwrap(), q, n).unwrap();
            u = g.matmul(&u);
        }
        if n > 1 {
            u = cnot_ring(n).unwrap().matmul(&u);
        }
    }
    u
}

fn pure(n: usize, angles: &[f64]) -> DensityMatrix {
    DensityMatrix::from_vector(&StateVector::zero(n)).evolve(&unitary(n, angles)).unwrap()
}

/// Mixture of two random pure states and a bit of `I/d`, so it has full rank.
fn full_rank(n: usize, a: &[f64], b: &[f64], w: f64) -> DensityMatrix {
    let mixed = DensityMatrix::maximally_mixed(n);
    DensityMatrix::mix(&[pure(n, a), pure(n, b), mixed], &[w * 0.9, (1.0 - w) * 0.9, 0.1]).unwrap()
}

fn angles(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(ANGLE, len)
}

fn n_and_angles(k: usize) -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
    (1usize..=2).prop_flat_map(move |n| (Just(n), prop::collection::vec(angles(6 * n), k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transfer_is_orthogonal_with_identity_block((n, a) in n_and_angles(1)) {
        let t = transfer_of_unitary(&unitary(n, &a[0])).unwrap();
        prop_assert!(t.orthogonality_deviation() < 1e-10);
        prop_assert!(t.block_deviation() < 1e-10);
    }

    #[test]
    fn transfer_respects_products_and_states((n, a) in n_and_angles(2)) {
        let (u1, u2) = (unitary(n, &a[0]), unitary(n, &a[1]));
        let t12 = transfer_of_unitary(&u1.matmul(&u2)).unwrap();
        let composed = transfer_of_unitary(&u1).unwrap().compose(&transfer_of_unitary(&u2).unwrap());
        prop_assert!((t12.entries() - composed.entries()).amax() < 1e-10);

        let rho = pure(n, &a[1]);
        let direct = to_pauli(&rho.evolve(&u1).unwrap());
        let via = transfer_of_unitary(&u1).unwrap().apply(&to_pauli(&rho)).unwrap();
        for (x, y) in direct.coeffs().iter().zip(via.coeffs()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn fuchs_van_de_graaf((n, a) in n_and_angles(4), w in 0.0..1.0f64, v in 0.0..1.0f64) {
        let r1 = full_rank(n, &a[0], &a[1], w);
        let r2 = full_rank(n, &a[2], &a[3], v);
        let t = trace_distance(&r1, &r2).unwrap();
        let f = fidelity(&r1, &r2).unwrap();
        prop_assert!(1.0 - f <= t + 1e-9, "1-F={} T={}", 1.0 - f, t);
        prop_assert!(t <= (1.0 - f * f).max(0.0).sqrt() + 1e-9, "T={} F={}", t, f);
    }

    #[test]
    fn trace_distance_to_mixed_within_d2_ceiling((n, a) in n_and_angles(2), w in 0.0..1.0f64) {
        let rho = DensityMatrix::mix(
            &[pure(n, &a[0]), pure(n, &a[1])],
            &[w, 1.0 - w],
        ).unwrap();
        let mixed = DensityMatrix::maximally_mixed(n);
        let div = d2(&rho, &mixed).unwrap();
        prop_assert!((div - d2_to_mixed_from_pauli(&to_pauli(&rho))).abs() < 1e-10);
        let t = trace_distance(&rho, &mixed).unwrap();
        prop_assert!(t <= td_from_d2_bound(div).unwrap() + 1e-9);
    }

    #[test]
    fn renyi_grows_with_order(
        (n, a) in n_and_angles(4),
        w in 0.0..1.0f64,
        lo in 0.1..0.95f64,
        step in 0.1..1.5f64,
    ) {
        let r1 = full_rank(n, &a[0], &a[1], w);
        let r2 = full_rank(n, &a[2], &a[3], 0.5);
        let hi = if lo + step > 0.99 && lo + step < 1.01 { 1.2 } else { lo + step };
        let d_lo = renyi(lo, &r1, &r2).unwrap();
        let d_hi = renyi(hi, &r1, &r2).unwrap();
        prop_assert!(d_lo <= d_hi + 1e-9, "D_{}={} D_{}={}", lo, d_lo, hi, d_hi);
        let two = renyi(2.0, &r1, &r2).unwrap();
        prop_assert!((two - d2(&r1, &r2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn expected_gate_contracts(mu in prop::array::uniform3(ANGLE), s in 0.05..3.0f64) {
        let t = expected_transfer_single(mu, [s; 3]).unwrap();
        prop_assert!(contraction_eigenvalue(&t).unwrap() <= (-s).exp() + 1e-12);
    }

    #[test]
    fn analytic_divergence_under_bound(
        n in 1usize..=2,
        l in 0usize..=4,
        sigma2 in 0.2..2.0f64,
        seed in any::<u64>(),
    ) {
        let spec = CircuitSpec::unpadded(n, l, 1, Entangler::RingCnot).unwrap();
        let mut rng = reupload_lab::data::Rng::new(seed);
        let theta = ParameterTensor::random_normal(&spec, &mut rng);
        let means: Vec<f64> = (0..spec.data_dim()).map(|_| rng.normal(0.0, 4.0)).collect();
        let gauss = GaussianSpec::isotropic(means, sigma2).unwrap();
        let beta = expected_state_analytic(&spec, &gauss, &theta).unwrap();
        let bound = divergence_bound(n, l, sigma2).unwrap();
        prop_assert!(d2_to_mixed_from_pauli(&beta) <= bound + 1e-9);
        prop_assert!(divergence_bound(n, l + 1, sigma2).unwrap() < bound);
    }

    #[test]
    fn class_outputs_are_a_distribution(
        n in 1usize..=3,
        seed in any::<u64>(),
        x in prop::collection::vec(ANGLE, 9),
    ) {
        let spec = CircuitSpec::new(n, 1, 2, 2, Entangler::RingCnot).unwrap();
        let theta = ParameterTensor::random_normal(&spec, &mut reupload_lab::data::Rng::new(seed));
        let h = Hypothesis::new(spec, theta, Task::Classification).unwrap();
        let (p0, p1) = h.class_outputs(&x[..3 * n]).unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p0));
        prop_assert_eq!(h.predict_class(&x[..3 * n]).unwrap(), decide(p0, p1));
    }

    #[test]
    fn decision_ignores_positive_scale(p0 in 0.0..1.0f64, p1 in 0.0..1.0f64, c in 0.01..100.0f64) {
        prop_assume!((p0 - p1).abs() > 1e-9);
        prop_assert_eq!(decide(p0, p1), decide(c * p0, c * p1));
    }

    #[test]
    fn quantization_error_below_resolution(x in prop::collection::vec(-50.0..50.0f64, 1..20), q in 0u32..20) {
        let (t, err) = quantize(&x, q);
        let step = 2f64.powi(-(q as i32));
        prop_assert!((0.0..step).contains(&err));
        for (orig, tv) in x.iter().zip(&t) {
            prop_assert!((0.0..std::f64::consts::TAU).contains(tv));
            prop_assert_eq!((tv / step).fract(), 0.0);
            let d = (orig.rem_euclid(std::f64::consts::TAU) - tv).abs();
            prop_assert!(d <= err + 1e-15);
        }
    }
}

#[test]
fn hermitian_helpers_agree_on_pure_input() {
    // A pure state against itself: zero distance, unit fidelity.
    let rho = pure(2, &[0.3; 12]);
    assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
    assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-7);
}
