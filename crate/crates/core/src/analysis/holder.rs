use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::graph::{lp_norm, DomainDecomposition, WeightedGraph};

/// Pairs closer than this in time are skipped by the fit.
pub const MIN_TIME_SEPARATION: f64 = 1e-9;

/// Time-Hölder data of a forcing term:
/// `‖f(s₁,·) − f(s₂,·)‖_{L²(Ω°)} ≤ C |s₁ − s₂|^γ` and `c' = ‖f(0,·)‖²_{L²(Ω°)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderSpec {
    pub c: f64,
    pub gamma: f64,
    pub c_prime: f64,
}

impl HolderSpec {
    pub fn new(c: f64, gamma: f64, c_prime: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "C",
                detail: format!("must be a nonnegative finite number, got {c}"),
            });
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                detail: format!("must lie in (0, 1], got {gamma}"),
            });
        }
        if !(c_prime >= 0.0 && c_prime.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c_prime",
                detail: format!("must be a nonnegative finite number, got {c_prime}"),
            });
        }
        Ok(HolderSpec { c, gamma, c_prime })
    }

    /// Bound `C |Δs|^γ` for a time separation `Δs`.
    pub fn bound(&self, ds: f64) -> f64 {
        self.c * ds.abs().powf(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPair {
    pub s1: f64,
    pub s2: f64,
    /// `‖f(s₁,·) − f(s₂,·)‖_{L²(Ω°)}`
    pub difference: f64,
    /// `difference / |s₁ − s₂|^γ` for the exponent used in the report
    pub implied_constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderEstimate {
    /// Fitted constant (`0` when the forcing does not vary between samples).
    pub c: f64,
    /// Fitted exponent (`1` when the forcing does not vary).
    pub gamma: f64,
    /// Pairs entering the fit.
    pub pairs: usize,
    /// Pair with the largest implied constant, measured with the declared
    /// exponent when one is given and the fitted one otherwise.
    pub worst: Option<HolderPair>,
    /// Pairs violating the declared bound.
    pub violations: usize,
    /// Outcome against the declared data, if any.
    pub passes: Option<bool>,
}

/// Least-squares fit of `log ‖Δf‖` against `log |Δs|` over all sample
/// pairs, plus a check of every pair against `declared`.
pub fn holder_estimate(
    forcing: &dyn Forcing,
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    sample_times: &[f64],
    declared: Option<&HolderSpec>,
) -> Result<HolderEstimate> {
    let mut times: Vec<f64> = sample_times.to_vec();
    times.sort_by(f64::total_cmp);
    times.dedup();
    if times.len() < 3 {
        return Err(Error::InsufficientSamples {
            required: 3,
            found: times.len(),
        });
    }
    let values: Vec<_> = times
        .iter()
        .map(|&t| dom.project(&forcing.eval(t, graph.vertex_count())))
        .collect();

    let mut pairs = Vec::new();
    for i in 0..times.len() {
        for j in i + 1..times.len() {
            let ds = times[j] - times[i];
            if ds < MIN_TIME_SEPARATION {
                continue;
            }
            let diff = lp_norm(graph, &values[j].sub(&values[i]), 2.0, dom.interior())?;
            pairs.push((times[i], times[j], ds, diff));
        }
    }

    let (c, gamma) = fit(&pairs);
    let exponent = declared.map_or(gamma, |d| d.gamma);
    let worst = pairs
        .iter()
        .map(|&(s1, s2, ds, difference)| HolderPair {
            s1,
            s2,
            difference,
            implied_constant: difference / ds.powf(exponent),
        })
        .max_by(|a, b| a.implied_constant.total_cmp(&b.implied_constant));

    let violations = declared.map_or(0, |d| {
        pairs
            .iter()
            .filter(|&&(_, _, ds, diff)| {
                let bound = d.bound(ds);
                diff > bound * (1.0 + 1e-12) + 1e-14
            })
            .count()
    });

    Ok(HolderEstimate {
        c,
        gamma,
        pairs: pairs.len(),
        worst,
        violations,
        passes: declared.map(|_| violations == 0),
    })
}

fn fit(pairs: &[(f64, f64, f64, f64)]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|p| p.3 > 0.0)
        .map(|&(_, _, ds, diff)| (ds.ln(), diff.ln()))
        .collect();
    if pts.is_empty() {
        return (0.0, 1.0);
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-300 {
        return ((my - mx).exp(), 1.0);
    }
    let gamma = sxy / sxx;
    (f64::exp(my - gamma * mx), gamma)
}
