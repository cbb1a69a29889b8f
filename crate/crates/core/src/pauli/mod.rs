//! Pauli-basis calculus: coefficient vectors, transfer matrices, expected
//! encoded states, divergences and the bounds derived from them.

pub mod basis;
pub mod bounds;
pub mod divergence;
pub mod expected;
pub mod transfer;

pub use basis::{from_pauli, pauli_string_matrix, to_pauli, PauliVector};
pub use bounds::{layer_threshold, td_from_d2_bound, divergence_bound};
pub use divergence::{affinity, d2, d2_to_mixed_from_pauli, fidelity, renyi, trace_distance};
pub use expected::{
    empirical_state, expected_observable_monte_carlo, expected_state_analytic,
    expected_state_monte_carlo, GaussianSpec,
};
pub use transfer::{
    contraction_eigenvalue, expected_cos_sin, expected_transfer_single, transfer_of_unitary,
    TransferMatrix,
};
