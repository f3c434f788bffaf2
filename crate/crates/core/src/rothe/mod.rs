//! Rothe time discretization: grids, step equations, inner solvers and
//! the Rothe functions built from the step solutions.

mod apriori;
mod grid;
mod problem;
mod sequence;
mod solver;
mod step;

pub use apriori::{apriori_check, AprioriReport, APRIORI_SLACK_FLOOR};
pub use grid::{make_grid, TimeGrid};
pub use problem::ProblemSpec;
pub use sequence::{
    interpolant_u, interpolant_w, run, run_with, sampled_step_gap, step_f, step_gap, step_u, step_w, RotheSequence,
};
pub use solver::{
    solve_step, solve_step_with, SolveMethod, SolverConfig, StepSolution, Strategy, DEFAULT_TOLERANCE,
    MAX_DESCENT_ITERATIONS, MAX_NEWTON_ITERATIONS,
};
pub use step::{damping, damping_derivative, evaluate_functional, functional_gradient, step_residual, StepState};
