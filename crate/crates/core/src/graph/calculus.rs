//! Pointwise discrete calculus: the μ-Laplacian, the gradient form and
//! μ-weighted integrals and norms.

use super::{VertexField, WeightedGraph};
use crate::error::{Error, Result};

/// `Δv(x) = (1/μ(x)) Σ_{y∼x} ω_xy (v(y) − v(x))`
pub fn mu_laplacian(graph: &WeightedGraph, v: &VertexField) -> VertexField {
    debug_assert_eq!(v.len(), graph.vertex_count());
    let out = (0..graph.vertex_count())
        .map(|x| {
            let s: f64 = graph
                .neighbors(x)
                .iter()
                .map(|&(y, w)| w * (v[y] - v[x]))
                .sum();
            s / graph.measure(x)
        })
        .collect::<Vec<_>>();
    VertexField::from_vec(out)
}

/// `Γ(v1, v2)(x) = (1/2μ(x)) Σ_{y∼x} ω_xy (v1(y) − v1(x))(v2(y) − v2(x))`
pub fn gradient_form(graph: &WeightedGraph, v1: &VertexField, v2: &VertexField) -> VertexField {
    debug_assert_eq!(v1.len(), graph.vertex_count());
    debug_assert_eq!(v2.len(), graph.vertex_count());
    let out = (0..graph.vertex_count())
        .map(|x| {
            let s: f64 = graph
                .neighbors(x)
                .iter()
                .map(|&(y, w)| w * (v1[y] - v1[x]) * (v2[y] - v2[x]))
                .sum();
            s / (2.0 * graph.measure(x))
        })
        .collect::<Vec<_>>();
    VertexField::from_vec(out)
}

/// `|∇v|²(x) = Γ(v, v)(x)`
pub fn grad_sq(graph: &WeightedGraph, v: &VertexField) -> VertexField {
    gradient_form(graph, v, v)
}

/// `D_μ = max_x (1/μ(x)) Σ_{y∼x} ω_xy`
pub fn d_mu(graph: &WeightedGraph) -> f64 {
    (0..graph.vertex_count())
        .map(|x| graph.weighted_degree(x) / graph.measure(x))
        .fold(0.0, f64::max)
}

/// `Σ_{x ∈ subset} μ(x) v(x)`
pub fn integrate(graph: &WeightedGraph, v: &VertexField, subset: &[usize]) -> Result<f64> {
    check_subset(graph, subset)?;
    Ok(subset.iter().map(|&x| graph.measure(x) * v[x]).sum())
}

/// `∫_V v dμ`
pub fn integrate_all(graph: &WeightedGraph, v: &VertexField) -> f64 {
    v.iter()
        .zip(graph.measures())
        .map(|(val, m)| m * val)
        .sum()
}

/// L^q norm on `subset` under μ; `q = f64::INFINITY` gives the sup norm.
pub fn lp_norm(graph: &WeightedGraph, v: &VertexField, q: f64, subset: &[usize]) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent { value: q });
    }
    check_subset(graph, subset)?;
    if q.is_infinite() {
        return Ok(subset.iter().fold(0.0_f64, |m, &x| m.max(v[x].abs())));
    }
    if q == 2.0 {
        let s: f64 = subset.iter().map(|&x| graph.measure(x) * v[x] * v[x]).sum();
        return Ok(s.sqrt());
    }
    // Scale by the sup norm so large q does not overflow.
    let scale = subset.iter().fold(0.0_f64, |m, &x| m.max(v[x].abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = subset
        .iter()
        .map(|&x| graph.measure(x) * (v[x].abs() / scale).powf(q))
        .sum();
    Ok(scale * s.powf(1.0 / q))
}

fn check_subset(graph: &WeightedGraph, subset: &[usize]) -> Result<()> {
    match subset.iter().find(|&&x| x >= graph.vertex_count()) {
        Some(&x) => Err(Error::UnknownVertex {
            vertex: x.to_string(),
        }),
        None => Ok(()),
    }
}
