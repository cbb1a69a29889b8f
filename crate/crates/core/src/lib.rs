//! Simulation, analysis and experiment tooling for data re-uploading quantum
//! classifiers.

pub mod data;
pub mod error;
pub mod lab;
pub mod model;
pub mod pauli;
pub mod qsim;

pub use error::{Error, Result};
