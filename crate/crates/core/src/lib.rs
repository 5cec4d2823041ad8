//! Simulation toolkit for CHSH experiments whose measurement settings are
//! times rather than angles.
//!
//! - [`linalg`]: complex matrices and states on ℂ² and ℂ²⊗ℂ².
//! - [`quantum`]: Hamiltonian evolution, time-parameterized observables, the
//!   singlet, correlations and the CHSH operator.
//! - [`lhv`]: local-realist value tables and exhaustive Bell bounds.
//! - [`experiment`]: Born-rule pair sampling and CHSH estimation.
//! - [`relativity`]: boosts, interval classes and frame-dependent orderings.

pub mod experiment;
pub mod lhv;
pub mod linalg;
pub mod quantum;
pub mod relativity;
