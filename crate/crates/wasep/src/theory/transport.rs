//! Macroscopic current across the origin for paths of the limiting density
//! field determined by an initial profile and a dynamic forcing.
//!
//! The forcing contribution is taken in its first-derivative form: the
//! second spatial derivative paired with a Gaussian survival probability
//! integrates by parts to the first derivative paired with the Gaussian
//! density, which for piecewise-linear slices is a finite sum of exact
//! normal-CDF differences.

use crate::error::Result;
use crate::theory::grid::{GridFunction, SpaceTimeGridFunction};
use crate::theory::quad::integrate;
use crate::theory::special::normal_cdf;
use crate::theory::variance::{Regime, VarianceSpec};

/// Transport weight in the super regime:
/// `V_t(u) = P(B_t + u >= 0) - 1{u >= 0}` (odd in `u`).
pub fn v_weight(t: f64, u: f64) -> f64 {
    assert!(t > 0.0);
    let ind = if u >= 0.0 { 1.0 } else { 0.0 };
    normal_cdf(u / t.sqrt()) - ind
}

/// Transport weight in the critical regime:
/// `R_t(u) = P(B_t >= -u - c t) - 1{u >= 0}` with `c` the signed velocity.
pub fn r_weight(t: f64, u: f64, velocity: f64) -> f64 {
    assert!(t > 0.0);
    let ind = if u >= 0.0 { 1.0 } else { 0.0 };
    normal_cdf((u + velocity * t) / t.sqrt()) - ind
}

/// Absolute tolerance of the quadratures below.
const ABS_TOL: f64 = 1e-8;

/// Net macroscopic mass transported across the origin by time `t` for the
/// field path determined by initial profile `phi` and (optional) dynamic
/// forcing `g`:
///
/// * sub:      `int_{-vt}^0 phi(u) du` (the forcing does not act);
/// * super:    `int phi V_t + int_0^t int d_u g(s,u) gauss_{t-s}(u) du ds`;
/// * critical: the same with the drift-shifted Gaussian and `R_t`.
pub fn macroscopic_current(
    phi: &GridFunction,
    g: Option<&SpaceTimeGridFunction>,
    t: f64,
    spec: &VarianceSpec,
) -> Result<f64> {
    assert!(t > 0.0);
    match spec.regime {
        Regime::Sub => Ok(phi.integral_between(-spec.velocity() * t, 0.0)),
        Regime::Super => {
            let profile = weighted_profile_integral(phi, |u| v_weight(t, u))?;
            let forcing = match g {
                Some(g) => forcing_integral(g, t, 0.0)?,
                None => 0.0,
            };
            Ok(profile + forcing)
        }
        Regime::Critical => {
            let vel = spec.velocity();
            let profile = weighted_profile_integral(phi, |u| r_weight(t, u, vel))?;
            let forcing = match g {
                Some(g) => forcing_integral(g, t, vel)?,
                None => 0.0,
            };
            Ok(profile + forcing)
        }
    }
}

/// `int phi(u) w(u) du`, split at the weight's jump at the origin.
fn weighted_profile_integral(phi: &GridFunction, w: impl Fn(f64) -> f64) -> Result<f64> {
    let (lo, hi) = phi.support();
    let f = |u: f64| phi.eval(u) * w(u);
    let mut total = 0.0;
    if lo < 0.0 {
        total += integrate(&f, lo, hi.min(0.0), 0.5 * ABS_TOL)?;
    }
    if hi > 0.0 {
        total += integrate(&f, lo.max(0.0), hi, 0.5 * ABS_TOL)?;
    }
    Ok(total)
}

/// `int_0^t inner(s) ds` where
/// `inner(s) = int d_u g(s, u) gauss_{t-s}(u + vel (t-s)) du`;
/// the spatial integral is an exact sum of normal-CDF differences over the
/// piecewise-constant slope cells of the slice at `s`.
fn forcing_integral(g: &SpaceTimeGridFunction, t: f64, vel: f64) -> Result<f64> {
    let inner = |s: f64| {
        let tau = t - s;
        let slice = g.slice_at(s);
        if tau <= 0.0 {
            // limit: the Gaussian concentrates at u = 0
            return slice
                .cells()
                .find(|(a, b, _)| *a <= 0.0 && 0.0 < *b)
                .map(|(_, _, slope)| slope)
                .unwrap_or(0.0);
        }
        let sd = tau.sqrt();
        let mut acc = 0.0;
        for (a, b, slope) in slice.cells() {
            if slope == 0.0 {
                continue;
            }
            // int_a^b gauss_tau(u + vel tau) du
            let mass = normal_cdf((b + vel * tau) / sd) - normal_cdf((a + vel * tau) / sd);
            acc += slope * mass;
        }
        acc
    };
    integrate(inner, 0.0, t, ABS_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::grid::{gaussian_bump, ramp, SpaceTimeGridFunction};
    use crate::theory::variance::VarianceSpec;
    use approx::assert_relative_eq;

    fn sub_spec() -> VarianceSpec {
        VarianceSpec::new(Regime::Sub, 1.0, 0.3)
    }

    #[test]
    fn zero_inputs_give_zero() {
        let zero = GridFunction::from_fn(-1.0, 1.0, 1.0 / 64.0, |_| 0.0).unwrap();
        for regime in [Regime::Sub, Regime::Critical, Regime::Super] {
            let spec = VarianceSpec::new(regime, 1.0, 0.3);
            let v = macroscopic_current(&zero, None, 1.0, &spec).unwrap();
            assert!(v.abs() <= 1e-9, "{regime:?}: {v}");
        }
    }

    // Sub regime: a unit-mass bump inside the transport window moves across
    // the origin in its entirety.
    #[test]
    fn sub_regime_transports_window_mass() {
        let spec = sub_spec();
        let t = 1.0;
        let window = spec.velocity() * t; // 0.4, window (-0.4, 0)
        let width = window / 14.0;
        let raw = gaussian_bump(-0.5 * window, width, 1.0).unwrap();
        let mass = raw.integral();
        let phi = gaussian_bump(-0.5 * window, width, 1.0 / mass).unwrap();
        let v = macroscopic_current(&phi, None, t, &spec).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-5);
    }

    #[test]
    fn sub_regime_reversed_velocity_flips_sign() {
        // rho > 1/2 reverses the drift; mass to the right of the origin is
        // counted negatively.
        let spec = VarianceSpec::new(Regime::Sub, 1.0, 0.7);
        assert!(spec.velocity() < 0.0);
        let t = 1.0;
        let phi = gaussian_bump(0.2, 0.02, 1.0).unwrap();
        let mass = phi.integral();
        let v = macroscopic_current(&phi, None, t, &spec).unwrap();
        assert_relative_eq!(v, -mass, max_relative = 1e-5);
    }

    // Super regime with even profile: V_t is odd so the integral vanishes.
    #[test]
    fn super_regime_even_profile_vanishes() {
        let spec = VarianceSpec::new(Regime::Super, 1.0, 0.3);
        let phi = gaussian_bump(0.0, 0.5, 1.3).unwrap();
        let v = macroscopic_current(&phi, None, 1.0, &spec).unwrap();
        assert!(v.abs() <= 1e-6, "got {v}");
    }

    #[test]
    fn v_weight_is_odd_and_bounded() {
        for t in [0.25, 1.0, 4.0] {
            for u in [-3.0, -0.4, 0.2, 1.7] {
                let v = v_weight(t, u);
                assert!(v.abs() <= 1.0);
                assert_relative_eq!(v_weight(t, -u), -v, max_relative = 1e-12);
            }
            assert!(v_weight(t, 40.0).abs() < 1e-12);
            assert!(v_weight(t, -40.0).abs() < 1e-12);
        }
    }

    #[test]
    fn r_weight_reduces_to_v_weight_without_drift() {
        for t in [0.5, 1.0] {
            for u in [-1.0, 0.3, 2.0] {
                assert_relative_eq!(r_weight(t, u, 0.0), v_weight(t, u), max_relative = 1e-13);
                assert!(r_weight(t, u, 0.4).abs() <= 1.0);
            }
        }
    }

    // Critical regime at zero velocity must agree with the super regime for
    // the same data, forcing included.
    #[test]
    fn critical_without_drift_matches_super() {
        let phi = gaussian_bump(-0.3, 0.2, 0.8).unwrap();
        let g = SpaceTimeGridFunction::constant_in_time(ramp(1), 1.0).unwrap();
        let sup = VarianceSpec::new(Regime::Super, 0.0, 0.3);
        let cri = VarianceSpec::new(Regime::Critical, 0.0, 0.3);
        let a = macroscopic_current(&phi, Some(&g), 1.0, &sup).unwrap();
        let b = macroscopic_current(&phi, Some(&g), 1.0, &cri).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
        assert!(a.abs() > 1e-3, "forcing term should be nonzero, got {a}");
    }

    // Independent oracle for the forcing term: for g constant in time with
    // profile p, inner(s) depends only on tau = t - s; compare the exact
    // CDF-difference route against midpoint quadrature of the density form.
    #[test]
    fn forcing_term_matches_density_quadrature() {
        let g = SpaceTimeGridFunction::constant_in_time(ramp(1), 1.0).unwrap();
        let t = 0.8;
        let exact = forcing_integral(&g, t, 0.0).unwrap();
        // d_u ramp = -1 on (0, 1)
        let n = 4000;
        let mut brute = 0.0;
        let dt = t / n as f64;
        for i in 0..n {
            let s = (i as f64 + 0.5) * dt;
            let tau = t - s;
            let sd = tau.sqrt();
            let m = 2000;
            let du = 1.0 / m as f64;
            let mut inner = 0.0;
            for j in 0..m {
                let u = (j as f64 + 0.5) * du;
                inner += -1.0 * (-0.5 * (u / sd).powi(2)).exp()
                    / (sd * crate::theory::special::SQRT_2PI)
                    * du;
            }
            brute += inner * dt;
        }
        assert_relative_eq!(exact, brute, max_relative = 1e-4);
    }
}
