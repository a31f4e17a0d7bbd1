//! Moderate-deviation rate functionals: finite-dimensional quadratic
//! forms, path-space rates in the sub and super regimes, the critical-regime
//! grid variational values, and the field-level cost functionals.

pub mod field;
pub mod path;
pub mod quadratic;

pub use field::{cost_dominates_rate, dynamic_cost, increment_cov_matrix, initial_cost, legendre_rate};
pub use path::{invert_volterra, path_rate_sub, path_rate_super, tagged_rate};
pub use quadratic::{critical_grid_rate, finite_dim_rate};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real path sampled on a strictly increasing time grid, interpreted as
/// its piecewise-linear interpolant. Paths start implicitly at `(0, 0)`
/// unless the grid itself starts at time 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPath {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl GridPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<GridPath> {
        if times.len() != values.len() {
            return Err(Error::InvalidParams("times/values length mismatch".into()));
        }
        if times.is_empty() {
            return Err(Error::InvalidParams("empty path".into()));
        }
        if times[0] < 0.0 || times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "times must be non-negative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite path value".into()));
        }
        Ok(GridPath { times, values })
    }

    /// Uniform grid of midpoints `(j + 1/2) T / m`, the natural sampling of
    /// a derivative for midpoint Volterra discretizations.
    pub fn midpoint_grid(horizon: f64, values: Vec<f64>) -> Result<GridPath> {
        if horizon <= 0.0 || values.is_empty() {
            return Err(Error::InvalidParams("midpoint grid needs T > 0 and values".into()));
        }
        let m = values.len();
        let dt = horizon / m as f64;
        let times = (0..m).map(|j| (j as f64 + 0.5) * dt).collect();
        GridPath::new(times, values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Piecewise-linear evaluation, anchored at `(0, 0)` and constant after
    /// the last node.
    pub fn eval(&self, t: f64) -> f64 {
        let times = &self.times;
        let values = &self.values;
        if t <= 0.0 {
            return if times[0] == 0.0 { values[0] } else { 0.0 };
        }
        if times[0] > 0.0 && t <= times[0] {
            return values[0] * t / times[0];
        }
        if t >= *times.last().unwrap() {
            return *values.last().unwrap();
        }
        let idx = times.partition_point(|&u| u < t);
        let (t0, t1) = (times[idx - 1], times[idx]);
        let (v0, v1) = (values[idx - 1], values[idx]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Exact squared L2 norm of the interpolant's derivative on `[0, last]`,
    /// including the implicit leading segment from `(0, 0)`.
    pub fn slope_energy(&self) -> f64 {
        let mut total = 0.0;
        let mut prev_t = 0.0;
        let mut prev_v = 0.0;
        let mut started = false;
        for (&t, &v) in self.times.iter().zip(&self.values) {
            if !started && t == 0.0 {
                prev_t = 0.0;
                prev_v = v;
                started = true;
                continue;
            }
            started = true;
            let dt = t - prev_t;
            let slope = (v - prev_v) / dt;
            total += slope * slope * dt;
            prev_t = t;
            prev_v = v;
        }
        total
    }

    /// Relative L2 distance between two paths on the union of their grids.
    pub fn rel_l2_distance(&self, other: &GridPath) -> f64 {
        let mut ts: Vec<f64> = self.times.iter().chain(other.times.iter()).copied().collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let (mut num, mut den) = (0.0, 0.0);
        for w in ts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let dt = w[1] - w[0];
            let d = self.eval(mid) - other.eval(mid);
            num += d * d * dt;
            den += other.eval(mid).powi(2) * dt;
        }
        if den == 0.0 {
            if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (num / den).sqrt()
        }
    }
}
