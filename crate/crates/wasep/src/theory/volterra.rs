//! Volterra kernel of fractional Brownian motion with Hurst parameter 1/4.
//!
//! `kernel(t, s)` is the integrand of the moving-average representation of
//! the process against white noise, normalised so that the variance at time
//! t equals sqrt(t). `kernel_cov(t, s)` recovers the process covariance by
//! integrating the product of two kernel slices, with substitutions that
//! flatten the integrable endpoint singularities at u = s and u = 0.

use crate::error::{Error, Result};
use crate::theory::quad::integrate;
use crate::theory::special::{gamma, hyp2f1};

/// Normalisation constant `8 Gamma(3/2) cos(pi/4) / pi` (equals
/// `2 sqrt(2) / sqrt(pi)`), fixed so the kernel reproduces unit-scale
/// variance sqrt(t).
pub fn variance_constant() -> f64 {
    8.0 * gamma(1.5) * (std::f64::consts::PI / 4.0).cos() / std::f64::consts::PI
}

fn norm_factor() -> f64 {
    variance_constant().sqrt() * gamma(0.75)
}

/// Kernel value for `0 < s < t`.
pub fn kernel(t: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < t) {
        return Err(Error::KernelDomain { t, s });
    }
    Ok(kernel_raw(t, s))
}

/// Unchecked kernel evaluation; caller guarantees `0 < s < t`. The
/// hypergeometric argument `1 - t/s` is strictly negative, where the
/// evaluator cannot fail to converge.
fn kernel_raw(t: f64, s: f64) -> f64 {
    let f = hyp2f1(0.25, -0.25, 0.75, 1.0 - t / s)
        .expect("hypergeometric evaluation on z < 0 is total");
    (t - s).powf(-0.25) / norm_factor() * f
}

/// Limit of `K(t, u) u^{1/4}` as `u -> 0`, used to regularise quadrature at
/// the lower endpoint.
fn small_u_coefficient() -> f64 {
    gamma(0.5) / (variance_constant().sqrt() * gamma(0.25))
}

/// Covariance integral `int_0^s K(t,u) K(s,u) du` for `0 < s <= t`,
/// computed to absolute tolerance `1e-8`.
///
/// Substitutions: `u = s - v^4` on the upper half removes the
/// `(s-u)^{-1/4}` singularity; `u = w^2` on the lower half removes the
/// combined `u^{-1/2}` behaviour of the two kernel factors near zero.
pub fn kernel_cov(t: f64, s: f64) -> Result<f64> {
    const ABS_TOL: f64 = 1e-8;
    if !(s > 0.0 && s <= t) {
        return Err(Error::KernelDomain { t, s });
    }
    let half = 0.5 * s;
    let c_inf = small_u_coefficient();

    // int_{s/2}^{s} K(t,u) K(s,u) du with u = s - v^4.
    let v_max = half.powf(0.25);
    let upper = integrate(
        |v| {
            if v == 0.0 {
                return 0.0;
            }
            let u = s - v.powi(4);
            let ks = if t == s {
                // at t = s the first factor shares the endpoint singularity
                kernel_raw(t, u).powi(2)
            } else {
                kernel_raw(t, u) * kernel_raw(s, u)
            };
            4.0 * v.powi(3) * ks
        },
        0.0,
        v_max,
        0.5 * ABS_TOL,
    )?;

    // int_0^{s/2} K(t,u) K(s,u) du with u = w^2; the integrand tends to
    // 2 c_inf^2 as w -> 0.
    let w_max = half.sqrt();
    let lower = integrate(
        |w| {
            if w == 0.0 {
                return 2.0 * c_inf * c_inf;
            }
            let u = w * w;
            2.0 * w * kernel_raw(t, u) * kernel_raw(s, u)
        },
        0.0,
        w_max,
        0.5 * ABS_TOL,
    )?;

    Ok(upper + lower)
}
