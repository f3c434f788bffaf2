//! Diagnostics built on Rothe sequences and reference trajectories.

mod convergence;
mod energy;
mod holder;

pub use convergence::{
    convergence_study, convergence_study_with_oracle, oracle_error, step_slope, uniform_samples, ConvergenceReport,
    OracleError,
};
pub use energy::{difference_energy, energy, energy_monotonicity_probe, UniquenessProbe};
pub use holder::{holder_estimate, HolderEstimate, HolderPair, HolderSpec, MIN_TIME_SEPARATION};
