//! The per-step nonlinear equation and its variational functional.
//!
//! Step `i` solves, on `Ω°`,
//!
//! ```text
//! F_i(u) = (u − 2u_{i−1} + u_{i−2})/δ² − Δ_Ω u + |w|^{p−1} w − f_i = 0,
//! w = (u − u_{i−1})/δ,
//! ```
//!
//! which is the Euler–Lagrange equation of
//!
//! ```text
//! J_i(u) = ∫_{Ω°} (u − 4u_{i−1} + 2u_{i−2})/δ² · u dμ + ∫_Ω |∇u|² dμ
//!        + 2δ/(p+1) ∫_{Ω°} |(u − u_{i−1})/δ|^{p+1} dμ − 2 ∫_{Ω°} f_i u dμ.
//! ```

use super::grid::TimeGrid;
use super::problem::ProblemSpec;
use crate::error::Result;
use crate::graph::{
    dirichlet_energy, dirichlet_laplacian_unchecked, DirichletOperator, DomainDecomposition,
    VertexField, WeightedGraph,
};

/// `|w|^{p−1} w`
#[inline]
pub fn damping(w: f64, p: f64) -> f64 {
    w.abs().powf(p - 1.0) * w
}

/// `d/dw |w|^{p−1} w = p |w|^{p−1}`
#[inline]
pub fn damping_derivative(w: f64, p: f64) -> f64 {
    p * w.abs().powf(p - 1.0)
}

/// History needed to pose step `i`: `u_{i−1}`, `u_{i−2}`, the previous
/// difference quotient `w_{i−1}` and `f_i = f(t_i, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepState {
    pub index: usize,
    pub delta: f64,
    pub u_prev: VertexField,
    pub u_prev2: VertexField,
    pub w_prev: VertexField,
    pub forcing: VertexField,
}

impl StepState {
    /// State of step 1: `u_0 = g`, `u_{−1} = g − δh`, `w_0 = h`.
    pub fn initial(dom: &DomainDecomposition, spec: &ProblemSpec, grid: &TimeGrid) -> Self {
        let delta = grid.delta();
        StepState {
            index: 1,
            delta,
            u_prev: spec.g().clone(),
            u_prev2: spec.g().combine(1.0, spec.h(), -delta),
            w_prev: spec.h().clone(),
            forcing: spec.forcing_at(dom, grid.time(1)),
        }
    }

    /// State of step `i ≥ 2` from the two previous solutions.
    pub fn from_history(
        index: usize,
        delta: f64,
        u_prev2: VertexField,
        u_prev: VertexField,
        w_prev: VertexField,
        forcing: VertexField,
    ) -> Self {
        StepState {
            index,
            delta,
            u_prev,
            u_prev2,
            w_prev,
            forcing,
        }
    }
}

fn check_all(dom: &DomainDecomposition, state: &StepState, u: &VertexField) -> Result<()> {
    dom.check_dirichlet(u)?;
    dom.check_dirichlet(&state.u_prev)?;
    dom.check_dirichlet(&state.u_prev2)?;
    dom.check_dirichlet(&state.w_prev)
}

/// `F_i(u)` on `Ω°`, zero elsewhere.
pub fn step_residual(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    state: &StepState,
    u: &VertexField,
) -> Result<VertexField> {
    check_all(dom, state, u)?;
    let (p, delta) = (spec.p(), state.delta);
    let lap = dirichlet_laplacian_unchecked(graph, dom, u);
    let mut out = VertexField::zeros(graph.vertex_count());
    for &x in dom.interior() {
        let w = (u[x] - state.u_prev[x]) / delta;
        out[x] = (u[x] - 2.0 * state.u_prev[x] + state.u_prev2[x]) / (delta * delta) - lap[x]
            + damping(w, p)
            - state.forcing[x];
    }
    Ok(out)
}

/// `J_i(u)`
pub fn evaluate_functional(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    state: &StepState,
    u: &VertexField,
) -> Result<f64> {
    check_all(dom, state, u)?;
    let (p, delta) = (spec.p(), state.delta);
    let mut inertia = 0.0;
    let mut dissipation = 0.0;
    let mut work = 0.0;
    for &x in dom.interior() {
        let m = graph.measure(x);
        inertia += m * (u[x] - 4.0 * state.u_prev[x] + 2.0 * state.u_prev2[x]) / (delta * delta) * u[x];
        dissipation += m * ((u[x] - state.u_prev[x]) / delta).abs().powf(p + 1.0);
        work += m * state.forcing[x] * u[x];
    }
    Ok(inertia + dirichlet_energy(graph, dom, u) + 2.0 * delta / (p + 1.0) * dissipation - 2.0 * work)
}

/// μ-weighted first variation of `J_i`: the field `grad` with
/// `d/dη J_i(u + ηψ)|₀ = Σ_x μ(x) grad(x) ψ(x)`. Assembled term by term
/// from the functional; it coincides with `2 F_i(u)`.
pub fn functional_gradient(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    state: &StepState,
    u: &VertexField,
) -> Result<VertexField> {
    check_all(dom, state, u)?;
    let (p, delta) = (spec.p(), state.delta);
    let lap = dirichlet_laplacian_unchecked(graph, dom, u);
    let mut out = VertexField::zeros(graph.vertex_count());
    for &x in dom.interior() {
        // d/du [(u − 4a + 2b) u / δ²] = (2u − 4a + 2b) / δ²
        let inertia = (2.0 * u[x] - 4.0 * state.u_prev[x] + 2.0 * state.u_prev2[x]) / (delta * delta);
        // d/du ∫_Ω |∇u|² = −2 Δ_Ω u by Green's formula
        let stiffness = -2.0 * lap[x];
        // d/du 2δ/(p+1) |(u − a)/δ|^{p+1} = 2 |w|^{p−1} w
        let w = (u[x] - state.u_prev[x]) / delta;
        let friction = 2.0 * damping(w, p);
        out[x] = inertia + stiffness + friction - 2.0 * state.forcing[x];
    }
    Ok(out)
}

/// The step equation written in the unknown velocity `w`, with
/// `u = u_{i−1} + δw`:
///
/// `R(w) = (w − w_{i−1})/δ − Δ_Ω u_{i−1} − δ Δ_Ω w + |w|^{p−1} w − f_i`.
///
/// `R(w) = F_i(u_{i−1} + δw)` in exact arithmetic, but its rounding error
/// is `O(ε/δ)` instead of the `O(ε/δ²)` of the displacement form, which
/// is what lets fine grids reach the residual tolerance.
pub(crate) struct VelocityEquation<'a> {
    pub op: &'a DirichletOperator,
    pub p: f64,
    pub delta: f64,
    w_prev: Vec<f64>,
    /// `−Δ_Ω u_{i−1} − f_i` on `Ω°`
    constant: Vec<f64>,
}

impl<'a> VelocityEquation<'a> {
    pub fn new(op: &'a DirichletOperator, dom: &DomainDecomposition, p: f64, state: &StepState) -> Self {
        let u_prev = dom.restrict(&state.u_prev);
        let f = dom.restrict(&state.forcing);
        let k_prev = op.apply_neg_laplacian(&u_prev);
        VelocityEquation {
            op,
            p,
            delta: state.delta,
            w_prev: dom.restrict(&state.w_prev),
            constant: k_prev.iter().zip(&f).map(|(k, f)| k - f).collect(),
        }
    }

    pub fn w_prev(&self) -> &[f64] {
        &self.w_prev
    }

    pub fn residual(&self, w: &[f64]) -> Vec<f64> {
        let kw = self.op.apply_neg_laplacian(w);
        (0..w.len())
            .map(|k| {
                (w[k] - self.w_prev[k]) / self.delta + self.constant[k] + self.delta * kw[k]
                    + damping(w[k], self.p)
            })
            .collect()
    }

    /// `‖r‖_{L²(Ω°)}`
    pub fn norm(&self, r: &[f64]) -> f64 {
        self.inner(r, r).sqrt()
    }

    /// `⟨a, b⟩_μ` on `Ω°`
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .zip(self.op.measures())
            .map(|((x, y), m)| m * x * y)
            .sum()
    }
}
