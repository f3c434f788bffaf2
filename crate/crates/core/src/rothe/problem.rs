use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::graph::{DomainDecomposition, VertexField};

/// Data of the damped wave problem
/// `u_tt − Δ_Ω u + |u_t|^{p−1} u_t = f` on `Ω°`, `u = g`, `u_t = h` at
/// `t = 0`, `u = 0` off `Ω°`, solved on `[0, T]`.
#[derive(Clone)]
pub struct ProblemSpec {
    p: f64,
    g: VertexField,
    h: VertexField,
    forcing: Arc<dyn Forcing>,
    horizon: f64,
}

impl ProblemSpec {
    pub fn new(
        dom: &DomainDecomposition,
        p: f64,
        g: VertexField,
        h: VertexField,
        forcing: impl Forcing + 'static,
        horizon: f64,
    ) -> Result<Self> {
        Self::with_shared_forcing(dom, p, g, h, Arc::new(forcing), horizon)
    }

    pub fn with_shared_forcing(
        dom: &DomainDecomposition,
        p: f64,
        g: VertexField,
        h: VertexField,
        forcing: Arc<dyn Forcing>,
        horizon: f64,
    ) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent { value: p });
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::NonpositiveHorizon { value: horizon });
        }
        dom.check_dirichlet(&g)?;
        dom.check_dirichlet(&h)?;
        Ok(ProblemSpec {
            p,
            g,
            h,
            forcing,
            horizon,
        })
    }

    /// Damping exponent `p > 1`.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Initial displacement.
    pub fn g(&self) -> &VertexField {
        &self.g
    }

    /// Initial velocity.
    pub fn h(&self) -> &VertexField {
        &self.h
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn forcing(&self) -> &dyn Forcing {
        self.forcing.as_ref()
    }

    pub fn shared_forcing(&self) -> Arc<dyn Forcing> {
        Arc::clone(&self.forcing)
    }

    /// `f(t, ·)` restricted to `Ω°` and extended by zero.
    pub fn forcing_at(&self, dom: &DomainDecomposition, t: f64) -> VertexField {
        dom.project(&self.forcing.eval(t, dom.vertex_count()))
    }

    /// Same problem with different initial data.
    pub fn with_initial_data(&self, dom: &DomainDecomposition, g: VertexField, h: VertexField) -> Result<Self> {
        Self::with_shared_forcing(dom, self.p, g, h, self.shared_forcing(), self.horizon)
    }

    /// Same problem on a different horizon.
    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::NonpositiveHorizon { value: horizon });
        }
        Ok(ProblemSpec {
            horizon,
            ..self.clone()
        })
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("p", &self.p)
            .field("g", &self.g)
            .field("h", &self.h)
            .field("horizon", &self.horizon)
            .field("forcing_is_zero", &self.forcing.is_zero())
            .finish()
    }
}
