//! File formats, problem files, CSV reports and the command layer behind
//! the `gwave` binary.

mod commands;
mod config;
mod csv;
mod files;

pub use commands::{cmd_check, cmd_converge, cmd_oracle, cmd_solve, CheckReport, CheckRow, CheckStatus};
pub use config::{emit, parse_problem, read_problem, ForcingConfig, LoadedProblem, RunConfig};
pub use csv::{comparison_csv, convergence_csv, fmt_f64, oracle_csv, trajectory_csv, write_atomic};
pub use files::{parse_domain, parse_edges, parse_measures, read_domain, read_graph};
