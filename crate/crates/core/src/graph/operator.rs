//! The Dirichlet operator as a linear map on interior values.
//!
//! With `M = diag(μ)` on `Ω°`, the operator `−Δ_Ω` has the symmetric form
//! `L = M(−Δ_Ω)`: `L_xx = Σ_{y∼x} ω_xy` (all neighbours, including those
//! outside `Ω°`) and `L_xy = −ω_xy` for interior neighbours.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{DomainDecomposition, WeightedGraph};
use crate::error::{Error, Result};

/// Interior systems up to this size are factorized densely; larger ones
/// use preconditioned conjugate gradients.
pub const DENSE_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearMethod {
    Auto,
    Dense,
    ConjugateGradient,
}

#[derive(Debug, Clone)]
pub struct DirichletOperator {
    mu: Vec<f64>,
    degree: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl DirichletOperator {
    pub fn new(graph: &WeightedGraph, dom: &DomainDecomposition) -> Self {
        let mut local = vec![usize::MAX; graph.vertex_count()];
        for (k, &x) in dom.interior().iter().enumerate() {
            local[x] = k;
        }
        let mut mu = Vec::with_capacity(dom.interior().len());
        let mut degree = Vec::with_capacity(dom.interior().len());
        let mut neighbors = Vec::with_capacity(dom.interior().len());
        for &x in dom.interior() {
            mu.push(graph.measure(x));
            degree.push(graph.weighted_degree(x));
            neighbors.push(
                graph
                    .neighbors(x)
                    .iter()
                    .filter(|&&(y, _)| local[y] != usize::MAX)
                    .map(|&(y, w)| (local[y], w))
                    .collect(),
            );
        }
        DirichletOperator {
            mu,
            degree,
            neighbors,
        }
    }

    /// `|Ω°|`
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    /// `L x`
    pub fn apply_stiffness(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                let off: f64 = self.neighbors[k].iter().map(|&(j, w)| w * x[j]).sum();
                self.degree[k] * x[k] - off
            })
            .collect()
    }

    /// `−Δ_Ω x = M⁻¹ L x`
    pub fn apply_neg_laplacian(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.apply_stiffness(x);
        for (v, m) in y.iter_mut().zip(&self.mu) {
            *v /= m;
        }
        y
    }

    pub fn dense_stiffness(&self) -> DMatrix<f64> {
        let m = self.dim();
        let mut a = DMatrix::zeros(m, m);
        for k in 0..m {
            a[(k, k)] = self.degree[k];
            for &(j, w) in &self.neighbors[k] {
                a[(k, j)] -= w;
            }
        }
        a
    }

    /// Solves `(diag(d) + s·L) x = rhs`. The matrix must be symmetric
    /// positive definite, which holds whenever `d ≥ 0` and `s > 0`.
    pub fn solve_shifted(&self, d: &[f64], s: f64, rhs: &[f64], method: LinearMethod) -> Result<Vec<f64>> {
        let m = self.dim();
        let dense = match method {
            LinearMethod::Auto => m <= DENSE_LIMIT,
            LinearMethod::Dense => true,
            LinearMethod::ConjugateGradient => false,
        };
        if dense {
            let mut a = self.dense_stiffness() * s;
            for k in 0..m {
                a[(k, k)] += d[k];
            }
            let chol = Cholesky::new(a).ok_or_else(|| Error::InvalidParameter {
                name: "operator",
                detail: "shifted Dirichlet operator is not positive definite".into(),
            })?;
            Ok(chol.solve(&DVector::from_column_slice(rhs)).as_slice().to_vec())
        } else {
            self.conjugate_gradient(d, s, rhs)
        }
    }

    fn conjugate_gradient(&self, d: &[f64], s: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.dim();
        let apply = |x: &[f64]| -> Vec<f64> {
            let lx = self.apply_stiffness(x);
            (0..m).map(|k| d[k] * x[k] + s * lx[k]).collect()
        };
        let precond: Vec<f64> = (0..m).map(|k| 1.0 / (d[k] + s * self.degree[k])).collect();
        let rhs_norm = dot(rhs, rhs).sqrt();
        let mut x = vec![0.0; m];
        if rhs_norm == 0.0 {
            return Ok(x);
        }
        let mut r = rhs.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&precond).map(|(a, b)| a * b).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        for _ in 0..(20 * m).max(100) {
            let ap = apply(&p);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "operator",
                    detail: "shifted Dirichlet operator is not positive definite".into(),
                });
            }
            let alpha = rz / pap;
            for k in 0..m {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            if dot(&r, &r).sqrt() <= 1e-15 * rhs_norm {
                return Ok(x);
            }
            z = r.iter().zip(&precond).map(|(a, b)| a * b).collect();
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for k in 0..m {
                p[k] = z[k] + beta * p[k];
            }
        }
        // Stagnation at roundoff level is acceptable; the callers check
        // their own residuals.
        Ok(x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
