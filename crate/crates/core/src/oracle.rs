//! Reference trajectories from the first-order system
//! `u′ = v`, `v′ = Δ_Ω u − |v|^{p−1} v + f` on `Ω°`, integrated with the
//! classical fourth-order Runge–Kutta method at a fixed step.
//!
//! The state holds only the `Ω°` entries, so boundary and exterior values
//! are zero at every stage.

use log::debug;

use crate::analysis::energy;
use crate::error::{Error, Result};
use crate::graph::{d_mu, DirichletOperator, DomainDecomposition, VertexField, WeightedGraph};
use crate::rothe::{damping, ProblemSpec};

/// Internal steps between stored snapshots.
pub const SNAPSHOT_STRIDE: usize = 100;
/// Any state entry beyond this magnitude aborts the integration.
pub const DIVERGENCE_LIMIT: f64 = 1e12;
pub const METHOD_TAG: &str = "rk4";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// `u`, `v = u_t` and `v′` on `Ω°`
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub a: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct OracleTrajectory {
    dt: f64,
    horizon: f64,
    dom: DomainDecomposition,
    snapshots: Vec<Snapshot>,
    forcing_is_zero: bool,
}

/// Energy `E(t) = ∫_Ω |∇u|² dμ + ∫_{Ω°} |u_t|² dμ` at each stored snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
}

impl EnergySeries {
    /// `min_k (E(t_{k−1}) − E(t_k))`, or `0` for a single sample.
    pub fn min_slack(&self) -> f64 {
        self.energies
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0_f64, f64::min)
    }

    /// Nonincreasing up to `tol_rel · E(0)`.
    pub fn is_nonincreasing(&self, tol_rel: f64) -> bool {
        self.min_slack() >= -tol_rel * self.energies.first().copied().unwrap_or(0.0)
    }
}

struct System<'a> {
    op: DirichletOperator,
    dom: &'a DomainDecomposition,
    spec: &'a ProblemSpec,
    p: f64,
}

impl System<'_> {
    fn accel(&self, t: f64, u: &[f64], v: &[f64]) -> Vec<f64> {
        let f = self.dom.restrict(&self.spec.forcing_at(self.dom, t));
        let ku = self.op.apply_neg_laplacian(u);
        (0..u.len())
            .map(|k| -ku[k] - damping(v[k], self.p) + f[k])
            .collect()
    }

    fn rk4(&self, t: f64, u: &[f64], v: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
        let axpy = |x: &[f64], s: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(a, b)| a + s * b).collect() };
        let k1u = v.to_vec();
        let k1v = self.accel(t, u, v);
        let u2 = axpy(u, h / 2.0, &k1u);
        let v2 = axpy(v, h / 2.0, &k1v);
        let k2v = self.accel(t + h / 2.0, &u2, &v2);
        let k2u = v2;
        let u3 = axpy(u, h / 2.0, &k2u);
        let v3 = axpy(v, h / 2.0, &k2v);
        let k3v = self.accel(t + h / 2.0, &u3, &v3);
        let k3u = v3;
        let u4 = axpy(u, h, &k3u);
        let v4 = axpy(v, h, &k3v);
        let k4v = self.accel(t + h, &u4, &v4);
        let k4u = v4;
        let step = |x: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
            (0..x.len())
                .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect()
        };
        (step(u, &k1u, &k2u, &k3u, &k4u), step(v, &k1v, &k2v, &k3v, &k4v))
    }

    fn snapshot(&self, t: f64, u: Vec<f64>, v: Vec<f64>) -> Snapshot {
        let a = self.accel(t, &u, &v);
        Snapshot { t, u, v, a }
    }
}

fn check_finite(t: f64, u: &[f64], v: &[f64]) -> Result<()> {
    if let Some(x) = u.iter().chain(v).find(|x| !(x.abs() <= DIVERGENCE_LIMIT)) {
        return Err(Error::UnstableIntegration {
            time: t,
            detail: format!("state entry {x:e} exceeds {DIVERGENCE_LIMIT:e}"),
        });
    }
    Ok(())
}

/// Integrates on `[0, T]` with the largest uniform step `T/⌈T/dt⌉ ≤ dt`.
///
/// Snapshots are kept at every [`SNAPSHOT_STRIDE`]-th step, at `T`, and
/// exactly at each of `sample_times` (reached by a partial step from the
/// preceding grid point).
pub fn mol_integrate(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    dt: f64,
    sample_times: &[f64],
) -> Result<OracleTrajectory> {
    let horizon = spec.horizon();
    if !(dt > 0.0 && dt <= horizon) {
        return Err(Error::NonpositiveStep { dt, horizon });
    }
    let stiffness = dt * (2.0 * d_mu(graph) * dom.interior().len() as f64).sqrt();
    if stiffness >= 1.0 {
        return Err(Error::UnstableIntegration {
            time: 0.0,
            detail: format!("dt·√(2·D_μ·|Ω°|) = {stiffness:.3} must be below 1"),
        });
    }
    let mut requested: Vec<f64> = sample_times.to_vec();
    if let Some(&t) = requested.iter().find(|&&t| !(0.0..=horizon).contains(&t)) {
        return Err(Error::TimeRangeMismatch { t, horizon });
    }
    requested.sort_by(f64::total_cmp);
    requested.dedup();

    let steps = (horizon / dt).ceil() as usize;
    let h = horizon / steps as f64;
    let time = |k: usize| if k == steps { horizon } else { k as f64 * h };
    debug!("rk4 oracle: {steps} steps of {h:e}");

    let sys = System {
        op: DirichletOperator::new(graph, dom),
        dom,
        spec,
        p: spec.p(),
    };
    let mut u = dom.restrict(spec.g());
    let mut v = dom.restrict(spec.h());
    let mut snapshots = vec![sys.snapshot(0.0, u.clone(), v.clone())];
    let mut next = requested.iter().copied().filter(|&t| t > 0.0).peekable();

    for k in 0..steps {
        let t0 = time(k);
        let t1 = time(k + 1);
        while let Some(&s) = next.peek() {
            if s >= t1 {
                break;
            }
            if s > t0 {
                let (us, vs) = sys.rk4(t0, &u, &v, s - t0);
                snapshots.push(sys.snapshot(s, us, vs));
            }
            next.next();
        }
        let (un, vn) = sys.rk4(t0, &u, &v, t1 - t0);
        check_finite(t1, &un, &vn)?;
        u = un;
        v = vn;
        let exact = next.peek().is_some_and(|&s| s == t1);
        if exact {
            next.next();
        }
        if exact || (k + 1) % SNAPSHOT_STRIDE == 0 || k + 1 == steps {
            snapshots.push(sys.snapshot(t1, u.clone(), v.clone()));
        }
    }

    Ok(OracleTrajectory {
        dt: h,
        horizon,
        dom: dom.clone(),
        snapshots,
        forcing_is_zero: spec.forcing().is_zero(),
    })
}

/// Cubic Hermite interpolation of `x` with derivative `dx` on `[0, 1]`.
fn hermite(s: f64, len: f64, x0: f64, x1: f64, d0: f64, d1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * x0 + h10 * len * d0 + h01 * x1 + h11 * len * d1
}

impl OracleTrajectory {
    /// Effective uniform step.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn method(&self) -> &'static str {
        METHOD_TAG
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn forcing_is_zero(&self) -> bool {
        self.forcing_is_zero
    }

    /// `(u(t), u_t(t))` as Dirichlet fields. Exact at stored snapshots,
    /// cubic Hermite between neighbouring ones.
    pub fn at(&self, t: f64) -> Result<(VertexField, VertexField)> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::TimeRangeMismatch { t, horizon: self.horizon });
        }
        let idx = self.snapshots.partition_point(|s| s.t < t);
        if let Some(s) = self.snapshots.get(idx).filter(|s| s.t == t) {
            return Ok((self.dom.extend(&s.u), self.dom.extend(&s.v)));
        }
        let (a, b) = (&self.snapshots[idx - 1], &self.snapshots[idx]);
        let len = b.t - a.t;
        let s = (t - a.t) / len;
        let u: Vec<f64> = (0..a.u.len())
            .map(|k| hermite(s, len, a.u[k], b.u[k], a.v[k], b.v[k]))
            .collect();
        let v: Vec<f64> = (0..a.v.len())
            .map(|k| hermite(s, len, a.v[k], b.v[k], a.a[k], b.a[k]))
            .collect();
        Ok((self.dom.extend(&u), self.dom.extend(&v)))
    }

    pub fn energy_series(&self, graph: &WeightedGraph) -> Result<EnergySeries> {
        let mut times = Vec::with_capacity(self.snapshots.len());
        let mut energies = Vec::with_capacity(self.snapshots.len());
        for s in &self.snapshots {
            times.push(s.t);
            energies.push(energy(graph, &self.dom, &self.dom.extend(&s.u), &self.dom.extend(&s.v))?);
        }
        Ok(EnergySeries { times, energies })
    }
}

/// Damped energy along an unforced trajectory.
pub fn energy_decay_check(
    traj: &OracleTrajectory,
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
) -> Result<EnergySeries> {
    if !traj.forcing_is_zero {
        return Err(Error::ForcingNotZero);
    }
    debug_assert_eq!(dom.interior(), traj.dom.interior());
    traj.energy_series(graph)
}
