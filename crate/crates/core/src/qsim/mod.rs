//! Dense state-vector and density-matrix simulation for small registers.

pub mod gates;
pub mod matrix;
pub mod observable;
pub mod state;

pub use gates::{cnot, cnot_ring, embed, pauli_x, pauli_y, pauli_z, r3, ry, rz, Axis};
pub use matrix::ComplexMatrix;
pub use observable::{expectation, Measurable, Observable, ObservableKind};
pub use state::{apply, density_from_vector, mix, DensityMatrix, StateVector};

/// Largest register the simulator is meant for.
pub const MAX_QUBITS: usize = 10;
