//! Benchmarking toolkit for computational phase transitions in random k-SAT.

pub mod error;
pub mod gibbs;
pub mod hamiltonian;
pub mod qaoa;
pub mod sat;
pub mod solvers;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
