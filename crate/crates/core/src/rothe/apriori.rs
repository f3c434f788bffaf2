use super::sequence::RotheSequence;
use crate::error::{Error, Result};
use crate::graph::{dirichlet_energy, interior_inner, DomainDecomposition, VertexField, WeightedGraph};

/// Slack below which a step is reported as violating the estimate.
pub const APRIORI_SLACK_FLOOR: f64 = -1e-10;

/// Per-step energy estimate of a Rothe sequence.
///
/// With `E_i = ‖∇u_{n,i}‖²_{L²(Ω)} + ‖w_{n,i}‖²_{L²(Ω°)}` every step must satisfy
/// `(1 − δ) E_i ≤ E_{i−1} + δ ‖f_{n,i}‖²`. Chaining gives two global
/// bounds: the closed form `e^T (E_0 + T max_i ‖f_i‖²)` and the sharper
/// discrete form `(1 − δ)^{−i} E_0 + Σ_k (1 − δ)^{−(i−k+1)} δ ‖f_k‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct AprioriReport {
    pub delta: f64,
    /// `E_i`, `i = 0..=n`
    pub energies: Vec<f64>,
    /// `(1 − δ) E_i`, `i = 1..=n`
    pub lhs: Vec<f64>,
    /// `E_{i−1} + δ ‖f_i‖²`, `i = 1..=n`
    pub rhs: Vec<f64>,
    /// `rhs − lhs`
    pub slacks: Vec<f64>,
    /// `e^T (E_0 + T max_i ‖f_i‖²)`
    pub exponential_bound: f64,
    /// Discrete chained bound at each step `i = 1..=n`
    pub discrete_bounds: Vec<f64>,
}

impl AprioriReport {
    /// Per-step pass flags (`slack ≥ −1e-10`).
    pub fn step_passes(&self) -> Vec<bool> {
        self.slacks.iter().map(|&s| s >= APRIORI_SLACK_FLOOR).collect()
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn steps_pass(&self) -> bool {
        self.min_slack() >= APRIORI_SLACK_FLOOR
    }

    /// Whether `E_i ≤ e^T (E_0 + T max ‖f‖²)` at every step.
    pub fn exponential_bound_holds(&self) -> bool {
        let tol = 1e-12 * (1.0 + self.exponential_bound);
        self.energies[1..].iter().all(|&e| e <= self.exponential_bound + tol)
    }

    /// Whether `E_i` respects the discrete chained bound at every step.
    pub fn discrete_bound_holds(&self) -> bool {
        self.energies[1..]
            .iter()
            .zip(&self.discrete_bounds)
            .all(|(&e, &b)| e <= b + 1e-10 * (1.0 + b))
    }
}

pub fn apriori_check(graph: &WeightedGraph, dom: &DomainDecomposition, seq: &RotheSequence) -> Result<AprioriReport> {
    let grid = seq.grid();
    let delta = grid.delta();
    if !grid.admits_apriori() {
        return Err(Error::StepTooLarge { delta });
    }
    let n = grid.steps();
    let sq = |v: &VertexField| interior_inner(graph, dom, v, v);

    let energies: Vec<f64> = (0..=n)
        .map(|i| dirichlet_energy(graph, dom, seq.u(i)) + sq(seq.w(i)))
        .collect();
    let f_sq: Vec<f64> = (1..=n).map(|i| sq(seq.forcing(i))).collect();

    let lhs: Vec<f64> = energies[1..].iter().map(|e| (1.0 - delta) * e).collect();
    let rhs: Vec<f64> = (0..n).map(|k| energies[k] + delta * f_sq[k]).collect();
    let slacks = rhs.iter().zip(&lhs).map(|(r, l)| r - l).collect();

    let f_max = f_sq.iter().copied().fold(0.0, f64::max);
    let exponential_bound = grid.horizon().exp() * (energies[0] + grid.horizon() * f_max);

    let growth = 1.0 / (1.0 - delta);
    let mut discrete_bounds = Vec::with_capacity(n);
    let mut bound = energies[0];
    for fk in &f_sq {
        bound = growth * (bound + delta * fk);
        discrete_bounds.push(bound);
    }

    Ok(AprioriReport {
        delta,
        energies,
        lhs,
        rhs,
        slacks,
        exponential_bound,
        discrete_bounds,
    })
}
