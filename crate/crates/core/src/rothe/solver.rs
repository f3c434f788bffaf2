//! Inner solvers for one time step.
//!
//! Both paths iterate on the velocity `w = (u − u_{i−1})/δ`. Newton uses
//! the exact Jacobian `I/δ − δΔ_Ω + diag(p|w|^{p−1})`, which is symmetric
//! positive definite after scaling by `M = diag(μ)`. The fallback
//! minimizes `J_i` by nonlinear conjugate gradients; since `J_i` is
//! strictly convex, the line search brackets and refines the root of the
//! directional derivative, which stays accurate near the minimizer where
//! differences of `J_i` values drown in rounding.

use log::{debug, warn};

use super::problem::ProblemSpec;
use super::step::{damping_derivative, StepState, VelocityEquation};
use crate::error::{Error, Result};
use crate::graph::{DirichletOperator, DomainDecomposition, LinearMethod, VertexField, WeightedGraph};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_NEWTON_ITERATIONS: usize = 50;
pub const MAX_DESCENT_ITERATIONS: usize = 20_000;
const MAX_HALVINGS: usize = 40;
const MAX_LINE_SEARCH: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Newton, falling back to minimization of `J_i` on stagnation.
    Auto,
    NewtonOnly,
    MinimizationOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Bound on `‖F_i(u)‖_{L²(Ω°)}`.
    pub tol: f64,
    pub strategy: Strategy,
    pub max_newton: usize,
    pub max_descent: usize,
    pub linear: LinearMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: DEFAULT_TOLERANCE,
            strategy: Strategy::Auto,
            max_newton: MAX_NEWTON_ITERATIONS,
            max_descent: MAX_DESCENT_ITERATIONS,
            linear: LinearMethod::Auto,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(tol: f64) -> Self {
        SolverConfig {
            tol,
            ..Default::default()
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tol",
                detail: format!("must be positive, got {}", self.tol),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Newton,
    Minimization,
}

#[derive(Debug, Clone)]
pub struct StepSolution {
    pub u: VertexField,
    pub w: VertexField,
    pub residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

/// Solves step `state.index` to `‖F_i(u)‖_{L²(Ω°)} ≤ tol` with the default
/// strategy and returns `u_{n,i}`.
pub fn solve_step(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    state: &StepState,
    tol: f64,
) -> Result<VertexField> {
    let op = DirichletOperator::new(graph, dom);
    solve_step_with(&op, dom, spec, state, &SolverConfig::with_tol(tol)).map(|s| s.u)
}

pub fn solve_step_with(
    op: &DirichletOperator,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    state: &StepState,
    config: &SolverConfig,
) -> Result<StepSolution> {
    config.validate()?;
    if !(state.delta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            detail: format!("step size must be positive, got {}", state.delta),
        });
    }
    dom.check_dirichlet(&state.u_prev)?;
    dom.check_dirichlet(&state.w_prev)?;
    let eq = VelocityEquation::new(op, dom, spec.p(), state);
    // Explicit-Euler predictor u_{i−1} + δ w_{i−1}.
    let guess = eq.w_prev().to_vec();

    let outcome = match config.strategy {
        Strategy::NewtonOnly => newton(&eq, guess, config)?,
        Strategy::MinimizationOnly => minimize(&eq, guess, config),
        Strategy::Auto => {
            let first = newton(&eq, guess, config)?;
            if first.residual <= config.tol {
                first
            } else {
                warn!(
                    "step {}: Newton stalled at residual {:e}, minimizing J_i",
                    state.index, first.residual
                );
                let second = minimize(&eq, first.w.clone(), config);
                Outcome {
                    iterations: first.iterations + second.iterations,
                    ..second
                }
            }
        }
    };
    if outcome.residual > config.tol {
        return Err(Error::NoConvergence {
            step: state.index,
            residual: outcome.residual,
        });
    }
    debug!(
        "step {}: {:?} converged in {} iterations, residual {:e}",
        state.index, outcome.method, outcome.iterations, outcome.residual
    );
    let w = dom.extend(&outcome.w);
    let u = state.u_prev.combine(1.0, &w, state.delta);
    Ok(StepSolution {
        u,
        w,
        residual: outcome.residual,
        iterations: outcome.iterations,
        method: outcome.method,
    })
}

struct Outcome {
    w: Vec<f64>,
    residual: f64,
    iterations: usize,
    method: SolveMethod,
}

/// Damped Newton: halve the step while the residual norm does not decrease.
fn newton(eq: &VelocityEquation<'_>, mut w: Vec<f64>, config: &SolverConfig) -> Result<Outcome> {
    let mu = eq.op.measures();
    let mut r = eq.residual(&w);
    let mut norm = eq.norm(&r);
    let mut iterations = 0;
    while norm > config.tol && iterations < config.max_newton {
        iterations += 1;
        let diag: Vec<f64> = w
            .iter()
            .zip(mu)
            .map(|(&wk, &m)| m * (1.0 / eq.delta + damping_derivative(wk, eq.p)))
            .collect();
        let rhs: Vec<f64> = r.iter().zip(mu).map(|(rk, m)| -m * rk).collect();
        let step = eq.op.solve_shifted(&diag, eq.delta, &rhs, config.linear)?;

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = w.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
            let tr = eq.residual(&trial);
            let tn = eq.norm(&tr);
            if tn < norm {
                accepted = Some((trial, tr, tn));
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((trial, tr, tn)) => {
                w = trial;
                r = tr;
                norm = tn;
            }
            None => break,
        }
    }
    Ok(Outcome {
        w,
        residual: norm,
        iterations,
        method: SolveMethod::Newton,
    })
}

/// Polak–Ribière nonlinear conjugate gradients on `Φ(w) = J_i(u_{i−1} + δw)`,
/// whose μ-gradient is `2δ R(w)`.
fn minimize(eq: &VelocityEquation<'_>, mut w: Vec<f64>, config: &SolverConfig) -> Outcome {
    let m = w.len();
    let mut r = eq.residual(&w);
    let mut norm = eq.norm(&r);
    let mut d: Vec<f64> = r.iter().map(|x| -x).collect();
    // The Hessian of Φ/2δ is close to I/δ, so δ is the natural first step.
    let mut alpha = eq.delta;
    let mut iterations = 0;
    while norm > config.tol && iterations < config.max_descent {
        iterations += 1;
        let slope0 = eq.inner(&r, &d);
        if slope0 >= 0.0 {
            d = r.iter().map(|x| -x).collect();
        }
        let (a, w_next, r_next) = line_search(eq, &w, &d, alpha);
        if a == 0.0 {
            break;
        }
        alpha = a;
        let norm_next = eq.norm(&r_next);
        let diff: Vec<f64> = r_next.iter().zip(&r).map(|(a, b)| a - b).collect();
        let beta = (eq.inner(&r_next, &diff) / (norm * norm)).max(0.0);
        let restart = iterations % m.max(1) == 0;
        for k in 0..m {
            d[k] = -r_next[k] + if restart { 0.0 } else { beta * d[k] };
        }
        w = w_next;
        r = r_next;
        norm = norm_next;
    }
    Outcome {
        w,
        residual: norm,
        iterations,
        method: SolveMethod::Minimization,
    }
}

/// Approximate minimizer of `Φ(w + a d)` over `a > 0`: expand or
/// backtrack from `a0` to bracket a sign change of the directional
/// derivative, then refine by safeguarded secant steps.
fn line_search(eq: &VelocityEquation<'_>, w: &[f64], d: &[f64], a0: f64) -> (f64, Vec<f64>, Vec<f64>) {
    let eval = |a: f64| {
        let trial: Vec<f64> = w.iter().zip(d).map(|(x, s)| x + a * s).collect();
        let r = eq.residual(&trial);
        let slope = eq.inner(&r, d);
        (trial, r, slope)
    };
    let slope0 = eq.inner(&eq.residual(w), d);
    if slope0 >= 0.0 {
        return (0.0, w.to_vec(), eq.residual(w));
    }
    let (mut lo, mut slope_lo) = (0.0, slope0);
    let mut hi = a0;
    let (mut t, mut r, mut slope_hi) = eval(hi);
    let mut count = 0;
    while slope_hi < 0.0 && count < MAX_LINE_SEARCH {
        lo = hi;
        slope_lo = slope_hi;
        hi *= 2.0;
        (t, r, slope_hi) = eval(hi);
        count += 1;
    }
    let target = 1e-4 * slope0.abs();
    let mut best = (hi, t, r, slope_hi);
    for it in 0..MAX_LINE_SEARCH {
        if best.3.abs() <= target {
            break;
        }
        // Secant on the bracket, bisection every third iteration.
        let mut a = if it % 3 == 2 {
            0.5 * (lo + hi)
        } else {
            lo - slope_lo * (hi - lo) / (slope_hi - slope_lo)
        };
        if !(a > lo && a < hi) {
            a = 0.5 * (lo + hi);
        }
        if a <= lo || a >= hi {
            break;
        }
        let (ta, ra, sa) = eval(a);
        if sa < 0.0 {
            lo = a;
            slope_lo = sa;
        } else {
            hi = a;
            slope_hi = sa;
        }
        best = (a, ta, ra, sa);
    }
    (best.0, best.1, best.2)
}
