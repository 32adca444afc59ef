//! Exact diagonalization of spin-1/2 Heisenberg rings.
//!
//! Builds the ring Hamiltonian, diagonalizes it (blocked by total σz when
//! that is conserved), and evaluates the thermal state: energy and
//! magnetization, the reduced state of a site pair, its concurrence, and
//! the CHSH violation measure. `threshold` finds the temperature where
//! neighbouring spins stop being entangled.

pub mod error;
pub mod model;
pub mod spectral;
pub mod thermo;
pub mod twoqubit;
pub mod entanglement;
pub mod bell;
pub mod threshold;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
