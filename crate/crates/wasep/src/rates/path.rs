//! Path-space rate functionals for the current and the tagged particle.

use crate::error::{Error, Result};
use crate::rates::GridPath;
use crate::theory::variance::{Regime, VarianceSpec};
use crate::theory::volterra::kernel;

/// Condition-number proxy above which the Volterra solve is regularised.
const CONDITION_LIMIT: f64 = 1e12;
/// Tikhonov parameter for ill-conditioned solves.
const TIKHONOV: f64 = 1e-8;

/// Sub-regime path rate `|h'|^2 / (2 chi alpha |1-2 rho|)` for the
/// piecewise-linear interpolant of `h` (the minimal-energy representative
/// of the grid data). Errors at `rho = 1/2` where the variance degenerates.
pub fn path_rate_sub(h: &GridPath, spec: &VarianceSpec) -> Result<f64> {
    if spec.regime != Regime::Sub {
        return Err(Error::InvalidParams(
            "sub-regime rate requested outside the sub regime".into(),
        ));
    }
    if spec.drift() == 0.0 {
        return Err(Error::DegenerateSubVariance);
    }
    Ok(h.slope_energy() / (2.0 * spec.chi() * spec.drift()))
}

/// Super-regime path rate from derivative samples on a uniform midpoint
/// grid: returns `sqrt(pi) / (2 sqrt(2) chi) |h'|^2` together with the
/// path reconstructed by the midpoint discretization of the Volterra map
/// (lower-triangular application of the kernel).
pub fn path_rate_super(hdot: &GridPath, spec: &VarianceSpec) -> Result<(f64, GridPath)> {
    if spec.regime != Regime::Super {
        return Err(Error::InvalidParams(
            "super-regime rate requested outside the super regime".into(),
        ));
    }
    let chi = spec.chi();
    if chi == 0.0 {
        return Err(Error::DegenerateDensity(spec.rho));
    }
    let (dt, horizon) = midpoint_layout(hdot)?;
    let m = hdot.len();
    let values = hdot.values();
    let energy: f64 = values.iter().map(|v| v * v * dt).sum();
    let rate = std::f64::consts::PI.sqrt() / (2.0 * std::f64::consts::SQRT_2 * chi) * energy;

    // h(tau_i) = sum_{j < i} K(tau_i, m_j) hdot_j dt on the node grid
    let mut times = Vec::with_capacity(m);
    let mut path = Vec::with_capacity(m);
    for i in 1..=m {
        let tau = if i == m { horizon } else { i as f64 * dt };
        let mut acc = 0.0;
        for j in 0..i {
            let mid = (j as f64 + 0.5) * dt;
            acc += kernel(tau, mid)? * values[j] * dt;
        }
        times.push(tau);
        path.push(acc);
    }
    Ok((rate, GridPath::new(times, path)?))
}

/// Numerical inverse of the midpoint Volterra map: recovers derivative
/// samples from path values on the uniform node grid `i T / m`. Applies
/// Tikhonov regularisation when the triangular system is ill-conditioned.
pub fn invert_volterra(h: &GridPath) -> Result<GridPath> {
    let times = h.times();
    let m = times.len();
    if m == 0 {
        return Err(Error::InvalidParams("empty path".into()));
    }
    let dt = times[0];
    if dt <= 0.0 {
        return Err(Error::InvalidParams(
            "path grid must start at T/m with h(0) = 0 implicit".into(),
        ));
    }
    for (i, &t) in times.iter().enumerate() {
        if (t - (i as f64 + 1.0) * dt).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(Error::InvalidParams("path grid must be uniform".into()));
        }
    }
    // lower-triangular kernel matrix on the midpoint discretization
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        let tau = times[i];
        for j in 0..=i {
            let mid = (j as f64 + 0.5) * dt;
            l[i * m + j] = kernel(tau, mid)? * dt;
        }
    }
    let (mut dmin, mut dmax) = (f64::INFINITY, 0.0_f64);
    for i in 0..m {
        let d = l[i * m + i].abs();
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    let horizon = times[m - 1];
    let values = if dmin == 0.0 || dmax / dmin > CONDITION_LIMIT {
        solve_tikhonov(&l, m, h.values(), TIKHONOV)
    } else {
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut acc = h.values()[i];
            for (j, yj) in y.iter().enumerate().take(i) {
                acc -= l[i * m + j] * yj;
            }
            y[i] = acc / l[i * m + i];
        }
        y
    };
    GridPath::midpoint_grid(horizon, values)
}

/// Regularised least squares `(L^T L + lambda I) x = L^T b` by normal
/// equations and Cholesky; for the small dense systems used here.
fn solve_tikhonov(l: &[f64], m: usize, b: &[f64], lambda: f64) -> Vec<f64> {
    let mut ata = vec![0.0; m * m];
    let mut atb = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0.0;
            for k in i.max(j)..m {
                acc += l[k * m + i] * l[k * m + j];
            }
            ata[i * m + j] = acc + if i == j { lambda } else { 0.0 };
        }
        let mut acc = 0.0;
        for k in i..m {
            acc += l[k * m + i] * b[k];
        }
        atb[i] = acc;
    }
    // in-place Cholesky solve
    let mut chol = ata;
    for j in 0..m {
        let mut d = chol[j * m + j];
        for k in 0..j {
            d -= chol[j * m + k] * chol[j * m + k];
        }
        let diag = d.max(lambda * 1e-3).sqrt();
        chol[j * m + j] = diag;
        for i in (j + 1)..m {
            let mut v = chol[i * m + j];
            for k in 0..j {
                v -= chol[i * m + k] * chol[j * m + k];
            }
            chol[i * m + j] = v / diag;
        }
    }
    let mut y = vec![0.0; m];
    for i in 0..m {
        let mut acc = atb[i];
        for (k, yk) in y.iter().enumerate().take(i) {
            acc -= chol[i * m + k] * yk;
        }
        y[i] = acc / chol[i * m + i];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let mut acc = y[i];
        for k in (i + 1)..m {
            acc -= chol[k * m + i] * x[k];
        }
        x[i] = acc / chol[i * m + i];
    }
    x
}

/// Tagged-particle rate: `rho^2` times the current rate.
pub fn tagged_rate(rate_current: f64, rho: f64) -> f64 {
    assert!(rate_current >= 0.0);
    rho * rho * rate_current
}

fn midpoint_layout(hdot: &GridPath) -> Result<(f64, f64)> {
    let times = hdot.times();
    if times.len() < 2 {
        let dt = 2.0 * times[0];
        return Ok((dt, dt));
    }
    let dt = times[1] - times[0];
    for (j, &t) in times.iter().enumerate() {
        if (t - (j as f64 + 0.5) * dt).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(Error::InvalidParams(
                "derivative samples must sit on a uniform midpoint grid".into(),
            ));
        }
    }
    Ok((dt, times.len() as f64 * dt))
}
