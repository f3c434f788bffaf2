//! Time-dependent forcing terms `f(t, ·)`.

use crate::analysis::HolderSpec;
use crate::graph::{lp_norm, DomainDecomposition, VertexField, WeightedGraph};

/// A forcing term that can be sampled at any `t ≥ 0`.
///
/// Values off `Ω°` are ignored by the solvers. Closures
/// `Fn(f64) -> VertexField` implement this trait directly.
pub trait Forcing: Send + Sync {
    fn eval(&self, t: f64, vertex_count: usize) -> VertexField;

    /// True when the forcing vanishes identically for all times.
    fn is_zero(&self) -> bool {
        false
    }
}

impl<F> Forcing for F
where
    F: Fn(f64) -> VertexField + Send + Sync,
{
    fn eval(&self, t: f64, _vertex_count: usize) -> VertexField {
        self(t)
    }
}

/// The closed family of forcing terms accepted by problem files. Each kind
/// satisfies a time-Hölder condition by construction (see
/// [`ForcingSpec::holder_spec`]).
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingSpec {
    Zero,
    /// `f(t, x) = a(x)`
    Constant { amplitude: VertexField },
    /// `f(t, x) = a(x) cos(ωt)`
    Sinusoid {
        amplitude: VertexField,
        angular_frequency: f64,
    },
    /// `f(t, x) = a(x) √t`
    SqrtTime { amplitude: VertexField },
}

impl ForcingSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ForcingSpec::Zero => "zero",
            ForcingSpec::Constant { .. } => "constant",
            ForcingSpec::Sinusoid { .. } => "sinusoid",
            ForcingSpec::SqrtTime { .. } => "sqrt_time",
        }
    }

    pub fn amplitude(&self) -> Option<&VertexField> {
        match self {
            ForcingSpec::Zero => None,
            ForcingSpec::Constant { amplitude }
            | ForcingSpec::Sinusoid { amplitude, .. }
            | ForcingSpec::SqrtTime { amplitude } => Some(amplitude),
        }
    }

    /// Hölder data valid on all of `[0, ∞)`:
    /// zero/constant have `C = 0`, the sinusoid is Lipschitz with
    /// `C = |ω| ‖a‖`, and `a√t` has `γ = 1/2`, `C = ‖a‖`.
    pub fn holder_spec(&self, graph: &WeightedGraph, dom: &DomainDecomposition) -> HolderSpec {
        let norm = |a: &VertexField| {
            lp_norm(graph, a, 2.0, dom.interior()).expect("interior indices are valid")
        };
        let c_prime = {
            let f0 = dom.project(&self.eval(0.0, graph.vertex_count()));
            norm(&f0).powi(2)
        };
        let (c, gamma) = match self {
            ForcingSpec::Zero | ForcingSpec::Constant { .. } => (0.0, 1.0),
            ForcingSpec::Sinusoid {
                amplitude,
                angular_frequency,
            } => (angular_frequency.abs() * norm(amplitude), 1.0),
            ForcingSpec::SqrtTime { amplitude } => (norm(amplitude), 0.5),
        };
        HolderSpec { c, gamma, c_prime }
    }
}

impl Forcing for ForcingSpec {
    fn eval(&self, t: f64, vertex_count: usize) -> VertexField {
        match self {
            ForcingSpec::Zero => VertexField::zeros(vertex_count),
            ForcingSpec::Constant { amplitude } => amplitude.clone(),
            ForcingSpec::Sinusoid {
                amplitude,
                angular_frequency,
            } => amplitude.scaled((angular_frequency * t).cos()),
            ForcingSpec::SqrtTime { amplitude } => amplitude.scaled(t.max(0.0).sqrt()),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, ForcingSpec::Zero)
    }
}
