//! Discrete calculus on finite connected weighted graphs.

mod calculus;
mod domain;
mod field;
mod operator;
mod spectral;
mod weighted;

pub use calculus::{d_mu, grad_sq, gradient_form, integrate, integrate_all, lp_norm, mu_laplacian};
pub use domain::{
    decompose_domain, dirichlet_energy, dirichlet_laplacian, green_terms, integrated_gradient_form,
    interior_inner, verify_green, DomainDecomposition,
};
pub(crate) use domain::dirichlet_laplacian_unchecked;
pub use field::VertexField;
pub use operator::{DirichletOperator, LinearMethod, DENSE_LIMIT};
pub use spectral::{dirichlet_ground_state, embedding_constant, smallest_dirichlet_eigenvalue};
pub use weighted::{build_graph, WeightedGraph};
