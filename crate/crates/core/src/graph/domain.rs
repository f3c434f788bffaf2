use std::collections::BTreeSet;

use super::calculus::gradient_form;
use super::{VertexField, WeightedGraph};
use crate::error::{Error, Result};

/// A domain `Ω ⊆ V` split into its boundary `∂Ω` (vertices of `Ω` with a
/// neighbour outside `Ω`) and interior `Ω° = Ω ∖ ∂Ω`.
///
/// Fields on `Ω°` are extended by zero to the whole vertex set; such
/// fields are called Dirichlet fields throughout the crate.
#[derive(Debug, Clone)]
pub struct DomainDecomposition {
    vertex_count: usize,
    omega: Vec<usize>,
    boundary: Vec<usize>,
    interior: Vec<usize>,
    in_omega: Vec<bool>,
    in_interior: Vec<bool>,
}

/// Decomposes the domain given by vertex labels.
pub fn decompose_domain<S: AsRef<str>>(
    graph: &WeightedGraph,
    omega: &[S],
) -> Result<DomainDecomposition> {
    let indices = omega
        .iter()
        .map(|l| graph.index_of(l.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    DomainDecomposition::from_indices(graph, &indices)
}

impl DomainDecomposition {
    pub fn from_indices(graph: &WeightedGraph, omega: &[usize]) -> Result<Self> {
        let n = graph.vertex_count();
        if let Some(&bad) = omega.iter().find(|&&x| x >= n) {
            return Err(Error::UnknownVertex {
                vertex: bad.to_string(),
            });
        }
        let omega: Vec<usize> = omega.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if omega.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let mut in_omega = vec![false; n];
        for &x in &omega {
            in_omega[x] = true;
        }
        let (boundary, interior): (Vec<usize>, Vec<usize>) = omega
            .iter()
            .partition(|&&y| graph.neighbors(y).iter().any(|&(x, _)| !in_omega[x]));
        if interior.is_empty() {
            return Err(Error::EmptyInterior);
        }
        if boundary.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        let mut in_interior = vec![false; n];
        for &x in &interior {
            in_interior[x] = true;
        }
        Ok(DomainDecomposition {
            vertex_count: n,
            omega,
            boundary,
            interior,
            in_omega,
            in_interior,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Vertices of `Ω`, ascending.
    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn in_omega(&self, x: usize) -> bool {
        self.in_omega[x]
    }

    pub fn is_interior(&self, x: usize) -> bool {
        self.in_interior[x]
    }

    /// Verifies `v` has the right length and vanishes identically off `Ω°`.
    pub fn check_dirichlet(&self, v: &VertexField) -> Result<()> {
        if v.len() != self.vertex_count {
            return Err(Error::LengthMismatch {
                expected: self.vertex_count,
                found: v.len(),
            });
        }
        for (x, &val) in v.iter().enumerate() {
            if val != 0.0 && !self.in_interior[x] {
                return Err(Error::NotDirichletField {
                    vertex: x.to_string(),
                    value: val,
                });
            }
        }
        Ok(())
    }

    /// Values of `v` on `Ω°`, in interior order.
    pub fn restrict(&self, v: &VertexField) -> Vec<f64> {
        self.interior.iter().map(|&x| v[x]).collect()
    }

    /// Zero extension of interior values to a full field.
    pub fn extend(&self, local: &[f64]) -> VertexField {
        debug_assert_eq!(local.len(), self.interior.len());
        let mut v = VertexField::zeros(self.vertex_count);
        for (&x, &val) in self.interior.iter().zip(local) {
            v[x] = val;
        }
        v
    }

    /// Copy of `v` with everything off `Ω°` set to zero.
    pub fn project(&self, v: &VertexField) -> VertexField {
        let mut out = VertexField::zeros(self.vertex_count);
        for &x in &self.interior {
            out[x] = v[x];
        }
        out
    }
}

/// `Δ_Ω v = (Δv)|_{Ω°}`, returned as a field supported on `Ω°`.
pub fn dirichlet_laplacian(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    v: &VertexField,
) -> Result<VertexField> {
    dom.check_dirichlet(v)?;
    Ok(dirichlet_laplacian_unchecked(graph, dom, v))
}

pub(crate) fn dirichlet_laplacian_unchecked(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    v: &VertexField,
) -> VertexField {
    let mut out = VertexField::zeros(graph.vertex_count());
    for &x in dom.interior() {
        let s: f64 = graph
            .neighbors(x)
            .iter()
            .map(|&(y, w)| w * (v[y] - v[x]))
            .sum();
        out[x] = s / graph.measure(x);
    }
    out
}

/// `∫_Ω Γ(w, v) dμ`
pub fn integrated_gradient_form(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    w: &VertexField,
    v: &VertexField,
) -> f64 {
    let gamma = gradient_form(graph, w, v);
    dom.omega().iter().map(|&x| graph.measure(x) * gamma[x]).sum()
}

/// `‖∇v‖²_{L²(Ω)} = ∫_Ω |∇v|² dμ`
pub fn dirichlet_energy(graph: &WeightedGraph, dom: &DomainDecomposition, v: &VertexField) -> f64 {
    integrated_gradient_form(graph, dom, v, v)
}

/// `∫_{Ω°} w v dμ`
pub fn interior_inner(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    w: &VertexField,
    v: &VertexField,
) -> f64 {
    dom.interior()
        .iter()
        .map(|&x| graph.measure(x) * w[x] * v[x])
        .sum()
}

/// The two sides of Green's formula: `(∫_{Ω°} Δ_Ω w · v dμ, ∫_Ω Γ(w, v) dμ)`.
pub fn green_terms(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    w: &VertexField,
    v: &VertexField,
) -> Result<(f64, f64)> {
    dom.check_dirichlet(w)?;
    dom.check_dirichlet(v)?;
    let lap = dirichlet_laplacian_unchecked(graph, dom, w);
    let lhs = interior_inner(graph, dom, &lap, v);
    let rhs = integrated_gradient_form(graph, dom, w, v);
    Ok((lhs, rhs))
}

/// Signed residual `∫_{Ω°} Δ_Ω w · v dμ + ∫_Ω Γ(w, v) dμ`, which vanishes
/// for Dirichlet fields.
pub fn verify_green(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    w: &VertexField,
    v: &VertexField,
) -> Result<f64> {
    let (lhs, rhs) = green_terms(graph, dom, w, v)?;
    Ok(lhs + rhs)
}
