use std::collections::BTreeMap;

use log::info;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{lp_norm, DomainDecomposition, WeightedGraph};
use crate::oracle::OracleTrajectory;
use crate::rothe::{make_grid, run, ProblemSpec, RotheSequence};

/// Sup-sampled errors of a Rothe sequence against a reference trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleError {
    /// `sup_t ‖u^{(n)}(t) − u(t)‖_{L²(Ω)}`
    pub u: f64,
    /// `sup_t ‖w^{(n)}(t) − u_t(t)‖_{L²(Ω)}`
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n_list: Vec<usize>,
    pub sample_times: Vec<f64>,
    /// `d_k = sup_t ‖u^{(2n_k)}(t) − u^{(n_k)}(t)‖_{L²(Ω)}`
    pub distances: Vec<f64>,
    /// Least-squares slope of `log d_k` against `log δ_k`, `δ_k = T/n_k`
    /// (`None` with fewer than two positive distances).
    pub slope: Option<f64>,
    /// Errors of `u^{(n_k)}` against the reference, when one was supplied.
    pub oracle_errors: Option<Vec<OracleError>>,
}

impl ConvergenceReport {
    /// `d_{k+1} / d_k`
    pub fn ratios(&self) -> Vec<f64> {
        self.distances.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Least-squares slope of `log e_k` against `log δ_k` for the oracle
    /// displacement errors.
    pub fn oracle_slope(&self) -> Option<f64> {
        let errs = self.oracle_errors.as_ref()?;
        step_slope(&self.n_list, &errs.iter().map(|e| e.u).collect::<Vec<_>>())
    }
}

/// `m` uniform times `t_j = j T/(m − 1)` covering `[0, T]`.
pub fn uniform_samples(horizon: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![horizon],
        _ => (0..m)
            .map(|j| if j == m - 1 { horizon } else { j as f64 * horizon / (m - 1) as f64 })
            .collect(),
    }
}

/// Least-squares slope of `log y` against `log(1/n)` over positive `y`,
/// i.e. the observed order in the step size.
pub fn step_slope(n: &[usize], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = n
        .iter()
        .zip(y)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&n, &y)| (-(n as f64).ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

fn validate_levels(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::InvalidParameter {
            name: "n_list",
            detail: "at least one grid size is required".into(),
        });
    }
    if n_list[0] == 0 {
        return Err(Error::ZeroSteps);
    }
    for w in n_list.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(Error::InvalidParameter {
                name: "n_list",
                detail: format!("grid sizes must increase and each divide the next ({} then {})", w[0], w[1]),
            });
        }
    }
    Ok(())
}

/// Distances between Rothe interpolants at `n_k` and `2n_k` steps, sampled
/// at `sample_count` uniform times. Solves run concurrently.
pub fn convergence_study(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    n_list: &[usize],
    sample_count: usize,
    tol: f64,
) -> Result<ConvergenceReport> {
    study(graph, dom, spec, n_list, sample_count, tol, None)
}

/// As [`convergence_study`], also measuring each `u^{(n_k)}` against a
/// reference trajectory at the same sample times.
pub fn convergence_study_with_oracle(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    n_list: &[usize],
    sample_count: usize,
    tol: f64,
    oracle: &OracleTrajectory,
) -> Result<ConvergenceReport> {
    study(graph, dom, spec, n_list, sample_count, tol, Some(oracle))
}

fn study(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    n_list: &[usize],
    sample_count: usize,
    tol: f64,
    oracle: Option<&OracleTrajectory>,
) -> Result<ConvergenceReport> {
    validate_levels(n_list)?;
    if sample_count < 2 {
        return Err(Error::InsufficientSamples {
            required: 2,
            found: sample_count,
        });
    }
    let horizon = spec.horizon();
    let sample_times = uniform_samples(horizon, sample_count);

    let mut levels: Vec<usize> = n_list.iter().flat_map(|&n| [n, 2 * n]).collect();
    levels.sort_unstable();
    levels.dedup();
    let runs: BTreeMap<usize, RotheSequence> = levels
        .par_iter()
        .map(|&n| {
            let seq = run(graph, dom, spec, &make_grid(horizon, n)?, tol)?;
            info!("convergence study: solved n = {n}");
            Ok((n, seq))
        })
        .collect::<Result<_>>()?;

    let mut distances = Vec::with_capacity(n_list.len());
    for &n in n_list {
        distances.push(sup_distance(graph, dom, &runs[&n], &runs[&(2 * n)], &sample_times)?);
    }
    let slope = step_slope(n_list, &distances);

    let oracle_errors = oracle
        .map(|traj| {
            n_list
                .iter()
                .map(|n| oracle_error(graph, dom, &runs[n], traj, &sample_times))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;

    Ok(ConvergenceReport {
        n_list: n_list.to_vec(),
        sample_times,
        distances,
        slope,
        oracle_errors,
    })
}

fn sup_distance(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    a: &RotheSequence,
    b: &RotheSequence,
    times: &[f64],
) -> Result<f64> {
    let mut sup = 0.0_f64;
    for &t in times {
        let diff = a.interpolant_u(t)?.sub(&b.interpolant_u(t)?);
        sup = sup.max(lp_norm(graph, &diff, 2.0, dom.omega())?);
    }
    Ok(sup)
}

/// Sup over `sample_times` of the `L²(Ω)` distances between the Rothe
/// functions `u^{(n)}`, `w^{(n)}` and the reference `u`, `u_t`.
pub fn oracle_error(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    seq: &RotheSequence,
    traj: &OracleTrajectory,
    sample_times: &[f64],
) -> Result<OracleError> {
    let horizon = seq.grid().horizon();
    if traj.horizon() < horizon {
        return Err(Error::TimeRangeMismatch {
            t: horizon,
            horizon: traj.horizon(),
        });
    }
    let mut err = OracleError { u: 0.0, w: 0.0 };
    for &t in sample_times {
        if !(0.0..=horizon).contains(&t) {
            return Err(Error::TimeRangeMismatch { t, horizon });
        }
        let (u, v) = traj.at(t)?;
        let du = seq.interpolant_u(t)?.sub(&u);
        let dw = seq.interpolant_w(t)?.sub(&v);
        err.u = err.u.max(lp_norm(graph, &du, 2.0, dom.omega())?);
        err.w = err.w.max(lp_norm(graph, &dw, 2.0, dom.omega())?);
    }
    Ok(err)
}
