//! Smallest eigenvalue of `−Δ_Ω` and the Sobolev-type embedding constants
//! derived from it.
//!
//! For a Dirichlet field `v`, `‖∇v‖²_{L²(Ω)} = ⟨v, −Δ_Ω v⟩_μ ≥ λ₁ ‖v‖²_{L²}`,
//! so `C₂ = λ₁^{-1/2}` is the sharp constant in `‖v‖_{L²} ≤ C₂ ‖∇v‖_{L²}`,
//! attained by the ground state.

use nalgebra::{DVector, SymmetricEigen};

use super::operator::{dot, DirichletOperator, LinearMethod, DENSE_LIMIT};
use super::{DomainDecomposition, VertexField, WeightedGraph};
use crate::error::{Error, Result};

const INVERSE_ITERATION_MAX: usize = 20_000;

/// `λ₁ > 0`, the smallest eigenvalue of `−Δ_Ω` on fields over `Ω°`.
pub fn smallest_dirichlet_eigenvalue(graph: &WeightedGraph, dom: &DomainDecomposition) -> Result<f64> {
    dirichlet_ground_state(graph, dom).map(|(lambda, _)| lambda)
}

/// `(λ₁, φ₁)` with `φ₁` normalized to `‖φ₁‖_{L²(Ω°)} = 1` and nonnegative
/// total mass.
pub fn dirichlet_ground_state(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
) -> Result<(f64, VertexField)> {
    let op = DirichletOperator::new(graph, dom);
    let (lambda, local) = if op.dim() <= DENSE_LIMIT {
        dense_ground_state(&op)
    } else {
        inverse_iteration(&op)?
    };
    Ok((lambda, dom.extend(&local)))
}

fn dense_ground_state(op: &DirichletOperator) -> (f64, Vec<f64>) {
    let mu = op.measures();
    let inv_sqrt: Vec<f64> = mu.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut s = op.dense_stiffness();
    let m = op.dim();
    for i in 0..m {
        for j in 0..m {
            s[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let eig = SymmetricEigen::new(s);
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("interior is non-empty");
    let y: DVector<f64> = eig.eigenvectors.column(k).into_owned();
    let v: Vec<f64> = (0..m).map(|i| y[i] * inv_sqrt[i]).collect();
    (lambda, normalize(mu, v))
}

/// Inverse power iteration `L x_{k+1} = M x_k` (zero shift; `L` is
/// positive definite), with the Rayleigh quotient as eigenvalue estimate.
fn inverse_iteration(op: &DirichletOperator) -> Result<(f64, Vec<f64>)> {
    let mu = op.measures();
    let m = op.dim();
    let zeros = vec![0.0; m];
    let mut x = normalize(mu, vec![1.0; m]);
    let mut lambda = rayleigh(op, &x);
    for _ in 0..INVERSE_ITERATION_MAX {
        let rhs: Vec<f64> = x.iter().zip(mu).map(|(a, b)| a * b).collect();
        let y = op.solve_shifted(&zeros, 1.0, &rhs, LinearMethod::ConjugateGradient)?;
        x = normalize(mu, y);
        let next = rayleigh(op, &x);
        let converged = (next - lambda).abs() <= 1e-13 * next;
        lambda = next;
        if converged {
            return Ok((lambda, x));
        }
    }
    Err(Error::InvalidParameter {
        name: "eigensolver",
        detail: format!("inverse iteration did not converge in {INVERSE_ITERATION_MAX} iterations"),
    })
}

fn rayleigh(op: &DirichletOperator, x: &[f64]) -> f64 {
    let lx = op.apply_stiffness(x);
    let mx: Vec<f64> = x.iter().zip(op.measures()).map(|(a, b)| a * b).collect();
    dot(x, &lx) / dot(x, &mx)
}

fn normalize(mu: &[f64], mut v: Vec<f64>) -> Vec<f64> {
    let norm: f64 = v
        .iter()
        .zip(mu)
        .map(|(a, m)| m * a * a)
        .sum::<f64>()
        .sqrt();
    let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    for a in &mut v {
        *a *= sign / norm;
    }
    v
}

/// Constant `C_q` with `‖v‖_{L^q(Ω)} ≤ C_q ‖∇v‖_{L²(Ω)}` for all Dirichlet
/// fields. `C₂ = λ₁^{-1/2}` is sharp; other exponents follow from the
/// finite-measure comparisons
/// `‖v‖_q ≤ μ(Ω°)^{1/q − 1/2} ‖v‖₂` for `q ≤ 2` and
/// `‖v‖_q ≤ μ_min^{1/q − 1/2} ‖v‖₂` for `q ≥ 2`.
pub fn embedding_constant(graph: &WeightedGraph, dom: &DomainDecomposition, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent { value: q });
    }
    let c2 = smallest_dirichlet_eigenvalue(graph, dom)?.powf(-0.5);
    let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
    let factor = if q <= 2.0 {
        let total: f64 = dom.interior().iter().map(|&x| graph.measure(x)).sum();
        total.powf(inv_q - 0.5)
    } else {
        let min = dom
            .interior()
            .iter()
            .map(|&x| graph.measure(x))
            .fold(f64::INFINITY, f64::min);
        min.powf(inv_q - 0.5)
    };
    Ok(c2 * factor)
}
