use crate::error::{Error, Result};

/// Equidistant partition `t_i = i·δ`, `δ = T/n`, of `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
    delta: f64,
}

pub fn make_grid(horizon: f64, steps: usize) -> Result<TimeGrid> {
    TimeGrid::new(horizon, steps)
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::NonpositiveHorizon { value: horizon });
        }
        if steps == 0 {
            return Err(Error::ZeroSteps);
        }
        Ok(TimeGrid {
            horizon,
            steps,
            delta: horizon / steps as f64,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `t_i`, computed as `i·δ` (never accumulated); `t_n` is exactly `T`.
    pub fn time(&self, i: usize) -> f64 {
        if i == self.steps {
            self.horizon
        } else {
            i as f64 * self.delta
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.time(i)).collect()
    }

    /// Grid index `k` with `t_k == t`, if `t` is a grid point.
    pub fn node_at(&self, t: f64) -> Option<usize> {
        let k = (t / self.delta).round();
        if k < 0.0 || k > self.steps as f64 {
            return None;
        }
        let k = k as usize;
        (self.time(k) == t).then_some(k)
    }

    /// The step `i ∈ {1, …, n}` whose interval `(t_{i−1}, t_i]` contains
    /// `t ∈ (0, T]`; `t = 0` maps to the first interval.
    pub fn interval_of(&self, t: f64) -> usize {
        let mut i = ((t / self.delta).ceil() as usize).clamp(1, self.steps);
        while i > 1 && t <= self.time(i - 1) {
            i -= 1;
        }
        while i < self.steps && t > self.time(i) {
            i += 1;
        }
        i
    }

    /// Whether the a priori estimates apply (`δ < 1`).
    pub fn admits_apriori(&self) -> bool {
        self.delta < 1.0
    }
}
