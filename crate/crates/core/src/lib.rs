//! Rothe's method for the damped wave equation
//! `u_tt − Δ_Ω u + |u_t|^{p−1} u_t = f` on finite weighted graphs.

pub mod analysis;
pub mod error;
pub mod forcing;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rothe;

pub use error::{Error, Result};
pub use forcing::{Forcing, ForcingSpec};
pub use graph::{build_graph, decompose_domain, DomainDecomposition, VertexField, WeightedGraph};
pub use rothe::{make_grid, run, ProblemSpec, RotheSequence, TimeGrid};
