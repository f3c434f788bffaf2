use super::grid::TimeGrid;
use super::problem::ProblemSpec;
use super::solver::{solve_step_with, SolverConfig};
use super::step::StepState;
use crate::error::{Error, Result};
use crate::graph::{interior_inner, lp_norm, DirichletOperator, DomainDecomposition, VertexField, WeightedGraph};

/// The step solutions `u_{n,i}` together with their difference quotients
/// `w_{n,i} = (u_{n,i} − u_{n,i−1})/δ` (`w_{n,0} = h`) and
/// `z_{n,i} = (w_{n,i} − w_{n,i−1})/δ`, plus the sampled forcing `f(t_i, ·)`.
#[derive(Debug, Clone)]
pub struct RotheSequence {
    grid: TimeGrid,
    u: Vec<VertexField>,
    w: Vec<VertexField>,
    z: Vec<VertexField>,
    forcing: Vec<VertexField>,
    residuals: Vec<f64>,
}

/// Solves steps `1..=n` in order with the default solver strategy.
pub fn run(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    grid: &TimeGrid,
    tol: f64,
) -> Result<RotheSequence> {
    run_with(graph, dom, spec, grid, &SolverConfig::with_tol(tol))
}

pub fn run_with(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    grid: &TimeGrid,
    config: &SolverConfig,
) -> Result<RotheSequence> {
    config.validate()?;
    let op = DirichletOperator::new(graph, dom);
    let n = grid.steps();
    let delta = grid.delta();

    let mut u = Vec::with_capacity(n + 1);
    let mut w = Vec::with_capacity(n + 1);
    let mut z = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let forcing: Vec<VertexField> = (0..=n).map(|i| spec.forcing_at(dom, grid.time(i))).collect();

    u.push(spec.g().clone());
    w.push(spec.h().clone());
    let mut state = StepState::initial(dom, spec, grid);
    for i in 1..=n {
        let sol = solve_step_with(&op, dom, spec, &state, config)?;
        z.push(sol.w.combine(1.0 / delta, &w[i - 1], -1.0 / delta));
        residuals.push(sol.residual);
        u.push(sol.u);
        w.push(sol.w);
        if i < n {
            state = StepState::from_history(
                i + 1,
                delta,
                u[i - 1].clone(),
                u[i].clone(),
                w[i].clone(),
                forcing[i + 1].clone(),
            );
        }
    }

    Ok(RotheSequence {
        grid: *grid,
        u,
        w,
        z,
        forcing,
        residuals,
    })
}

impl RotheSequence {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn steps(&self) -> usize {
        self.grid.steps()
    }

    /// `u_{n,i}`, `i = 0..=n`
    pub fn u(&self, i: usize) -> &VertexField {
        &self.u[i]
    }

    /// `w_{n,i}`, `i = 0..=n`
    pub fn w(&self, i: usize) -> &VertexField {
        &self.w[i]
    }

    /// `z_{n,i}`, `i = 1..=n`
    pub fn z(&self, i: usize) -> &VertexField {
        assert!(i >= 1, "z is defined for i >= 1");
        &self.z[i - 1]
    }

    /// `f(t_i, ·)` on `Ω°`, `i = 0..=n`
    pub fn forcing(&self, i: usize) -> &VertexField {
        &self.forcing[i]
    }

    /// Final `‖F_i(u_{n,i})‖_{L²(Ω°)}` reported by the inner solver.
    pub fn residual(&self, i: usize) -> f64 {
        self.residuals[i - 1]
    }

    pub fn displacements(&self) -> &[VertexField] {
        &self.u
    }

    pub fn velocities(&self) -> &[VertexField] {
        &self.w
    }

    fn check_range(&self, t: f64, lo: f64) -> Result<()> {
        let hi = self.grid.horizon();
        if !(t >= lo && t <= hi) {
            return Err(Error::TimeOutOfRange { t, lo, hi });
        }
        Ok(())
    }

    /// Rothe function `u^{(n)}(t) = u_{n,i−1} + (t − t_{i−1}) w_{n,i}` on
    /// `[t_{i−1}, t_i]`; exactly `u_{n,i}` at grid times.
    pub fn interpolant_u(&self, t: f64) -> Result<VertexField> {
        self.check_range(t, 0.0)?;
        if let Some(k) = self.grid.node_at(t) {
            return Ok(self.u[k].clone());
        }
        let i = self.grid.interval_of(t);
        Ok(self.u[i - 1].combine(1.0, &self.w[i], t - self.grid.time(i - 1)))
    }

    /// `w^{(n)}(t) = w_{n,i−1} + (t − t_{i−1}) z_{n,i}` on `[t_{i−1}, t_i]`.
    pub fn interpolant_w(&self, t: f64) -> Result<VertexField> {
        self.check_range(t, 0.0)?;
        if let Some(k) = self.grid.node_at(t) {
            return Ok(self.w[k].clone());
        }
        let i = self.grid.interval_of(t);
        Ok(self.w[i - 1].combine(1.0, &self.z[i - 1], t - self.grid.time(i - 1)))
    }

    /// Index of the step value used by the step functions at `t`:
    /// `0` on `[−δ, 0]`, `i` on `(t_{i−1}, t_i]`.
    fn step_index(&self, t: f64) -> Result<usize> {
        self.check_range(t, -self.grid.delta())?;
        if t <= 0.0 {
            Ok(0)
        } else {
            Ok(self.grid.interval_of(t))
        }
    }

    /// `ū^{(n)}(t)`: `u_{n,i}` on `(t_{i−1}, t_i]`, `g` on `[−δ, 0]`.
    pub fn step_u(&self, t: f64) -> Result<VertexField> {
        Ok(self.u[self.step_index(t)?].clone())
    }

    /// `w̄^{(n)}(t)`: `w_{n,i}` on `(t_{i−1}, t_i]`, `h` on `[−δ, 0]`.
    pub fn step_w(&self, t: f64) -> Result<VertexField> {
        Ok(self.w[self.step_index(t)?].clone())
    }

    /// `f^{(n)}(t)`: `f(t_i, ·)` on `(t_{i−1}, t_i]`, `f(0, ·)` on `[−δ, 0]`.
    pub fn step_f(&self, t: f64) -> Result<VertexField> {
        Ok(self.forcing[self.step_index(t)?].clone())
    }
}

/// `max_i δ ‖w_{n,i}‖_{L²(Ω)}`, which equals
/// `sup_{t ∈ (0, T]} ‖u^{(n)}(t) − ū^{(n)}(t)‖_{L²(Ω)}`.
pub fn step_gap(graph: &WeightedGraph, dom: &DomainDecomposition, seq: &RotheSequence) -> f64 {
    let delta = seq.grid.delta();
    (1..=seq.steps())
        .map(|i| delta * interior_inner(graph, dom, seq.w(i), seq.w(i)).sqrt())
        .fold(0.0, f64::max)
}

/// `max_t ‖u^{(n)}(t) − ū^{(n)}(t)‖_{L²(Ω)}` over the given times.
pub fn sampled_step_gap(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    seq: &RotheSequence,
    times: &[f64],
) -> Result<f64> {
    let mut sup = 0.0_f64;
    for &t in times {
        let diff = seq.interpolant_u(t)?.sub(&seq.step_u(t)?);
        sup = sup.max(lp_norm(graph, &diff, 2.0, dom.omega())?);
    }
    Ok(sup)
}

pub fn interpolant_u(seq: &RotheSequence, t: f64) -> Result<VertexField> {
    seq.interpolant_u(t)
}

pub fn interpolant_w(seq: &RotheSequence, t: f64) -> Result<VertexField> {
    seq.interpolant_w(t)
}

pub fn step_u(seq: &RotheSequence, t: f64) -> Result<VertexField> {
    seq.step_u(t)
}

pub fn step_w(seq: &RotheSequence, t: f64) -> Result<VertexField> {
    seq.step_w(t)
}

pub fn step_f(seq: &RotheSequence, t: f64) -> Result<VertexField> {
    seq.step_f(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::ForcingSpec;
    use crate::graph::dirichlet_laplacian;
    use crate::rothe::make_grid;
    use crate::rothe::step::damping;

    fn scalar_run(n: usize) -> (WeightedGraph, DomainDecomposition, ProblemSpec, RotheSequence) {
        let g = WeightedGraph::path(5);
        let d = DomainDecomposition::from_indices(&g, &[1, 2, 3]).unwrap();
        let mut init = VertexField::zeros(5);
        init[2] = 1.0;
        let spec = ProblemSpec::new(&d, 2.0, init, VertexField::zeros(5), ForcingSpec::Zero, 1.0).unwrap();
        let seq = run(&g, &d, &spec, &make_grid(1.0, n).unwrap(), 1e-10).unwrap();
        (g, d, spec, seq)
    }

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn scalar_two_steps_match_bisection() {
        let (_, _, _, seq) = scalar_run(2);
        let delta = 0.5;
        // Scalar step: (u − 2a + b)/δ² + 2u + |w|w = 0 with w = (u − a)/δ.
        let step = |a: f64, b: f64| {
            bisect(
                |u| {
                    let w = (u - a) / delta;
                    (u - 2.0 * a + b) / (delta * delta) + 2.0 * u + damping(w, 2.0)
                },
                -10.0,
                10.0,
            )
        };
        let u1 = step(1.0, 1.0);
        let u2 = step(u1, 1.0);
        assert!((seq.u(1)[2] - u1).abs() < 1e-9);
        assert!((seq.u(2)[2] - u2).abs() < 1e-9);
    }

    #[test]
    fn definitional_identities() {
        let (g, d, spec, seq) = scalar_run(8);
        let delta = seq.grid().delta();
        assert_eq!(seq.w(0), spec.h());
        assert_eq!(seq.u(0), spec.g());
        for i in 1..=8 {
            let wq = seq.u(i).combine(1.0 / delta, seq.u(i - 1), -1.0 / delta);
            assert!(wq.max_abs_diff(seq.w(i)) < 1e-13);
            let zq = seq.w(i).combine(1.0 / delta, seq.w(i - 1), -1.0 / delta);
            assert!(zq.max_abs_diff(seq.z(i)) == 0.0);
            // z − Δ_Ω u + |w|^{p−1} w − f = 0 on Ω°
            let lap = dirichlet_laplacian(&g, &d, seq.u(i)).unwrap();
            let r = seq.z(i)[2] - lap[2] + damping(seq.w(i)[2], 2.0);
            assert!(r.abs() < 1e-9, "step {i}: {r}");
            assert!(seq.residual(i) <= 1e-10);
        }
    }

    #[test]
    fn interpolants_and_step_functions() {
        let (_, _, spec, seq) = scalar_run(4);
        let grid = *seq.grid();
        for i in 0..=4 {
            assert_eq!(&seq.interpolant_u(grid.time(i)).unwrap(), seq.u(i));
            assert_eq!(&seq.interpolant_w(grid.time(i)).unwrap(), seq.w(i));
        }
        let mid = 0.5 * (grid.time(1) + grid.time(2));
        let expected = seq.u(1).combine(0.5, seq.u(2), 0.5);
        assert!(seq.interpolant_u(mid).unwrap().max_abs_diff(&expected) < 1e-15);
        assert_eq!(&seq.interpolant_u(0.0).unwrap(), spec.g());

        assert_eq!(&seq.step_u(0.0).unwrap(), spec.g());
        assert_eq!(&seq.step_w(-grid.delta() / 2.0).unwrap(), spec.h());
        assert_eq!(seq.step_u(grid.time(1) + 1e-12).unwrap(), *seq.u(2));
        assert_eq!(seq.step_u(grid.time(1)).unwrap(), *seq.u(1));
        assert_eq!(seq.step_f(0.1).unwrap(), VertexField::zeros(5));

        assert!(matches!(seq.interpolant_u(1.5), Err(Error::TimeOutOfRange { .. })));
        assert!(matches!(seq.interpolant_w(-0.1), Err(Error::TimeOutOfRange { .. })));
        assert!(seq.step_u(-grid.delta() - 1e-9).is_err());
    }

    #[test]
    fn gap_bound_dominates_samples() {
        let (g, d, _, seq) = scalar_run(16);
        let bound = step_gap(&g, &d, &seq);
        let times: Vec<f64> = (0..=400).map(|k| k as f64 / 400.0).collect();
        let sampled = sampled_step_gap(&g, &d, &seq, &times).unwrap();
        assert!(sampled <= bound * (1.0 + 1e-12));
        // just after a grid time the gap is nearly the full step increment
        let near: Vec<f64> = (1..=16).map(|i| seq.grid().time(i - 1) + 1e-9).collect();
        let close = sampled_step_gap(&g, &d, &seq, &near).unwrap();
        assert!(close >= bound * (1.0 - 1e-6));
    }

    #[test]
    fn zero_problem_stays_zero() {
        let g = WeightedGraph::path(6);
        let d = DomainDecomposition::from_indices(&g, &[1, 2, 3, 4]).unwrap();
        let zero = VertexField::zeros(6);
        let spec = ProblemSpec::new(&d, 3.0, zero.clone(), zero, ForcingSpec::Zero, 2.0).unwrap();
        let seq = run(&g, &d, &spec, &make_grid(2.0, 5).unwrap(), 1e-10).unwrap();
        for i in 0..=5 {
            assert_eq!(seq.u(i).max_abs(), 0.0);
            assert_eq!(seq.w(i).max_abs(), 0.0);
        }
        for i in 1..=5 {
            assert_eq!(seq.z(i).max_abs(), 0.0);
        }
    }
}
