//! Limiting covariance of the rescaled current.
//!
//! Three asymmetry regimes, indexed by how the weak-asymmetry exponent
//! compares to 1: below it the limit is a drift-scaled Brownian motion,
//! above it a fractional Brownian motion with Hurst parameter 1/4, and at
//! the threshold a drift-corrected interpolation between the two.

use serde::{Deserialize, Serialize};

use crate::theory::special::{normal_cdf, normal_pdf, SQRT_2PI};

/// Asymmetry regime, classified by the weak-asymmetry exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// exponent < 1
    Sub,
    /// exponent = 1
    Critical,
    /// exponent > 1
    Super,
}

impl Regime {
    pub fn from_beta(beta: f64) -> Regime {
        if beta < 1.0 {
            Regime::Sub
        } else if beta == 1.0 {
            Regime::Critical
        } else {
            Regime::Super
        }
    }
}

/// Parameters entering the limiting covariance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VarianceSpec {
    pub regime: Regime,
    pub alpha: f64,
    pub rho: f64,
}

impl VarianceSpec {
    pub fn new(regime: Regime, alpha: f64, rho: f64) -> VarianceSpec {
        assert!(alpha >= 0.0, "alpha must be non-negative");
        assert!((0.0..=1.0).contains(&rho), "rho must lie in [0,1]");
        VarianceSpec { regime, alpha, rho }
    }

    pub fn from_beta(beta: f64, alpha: f64, rho: f64) -> VarianceSpec {
        VarianceSpec::new(Regime::from_beta(beta), alpha, rho)
    }

    /// Static compressibility `chi = rho (1 - rho)`.
    #[inline]
    pub fn chi(&self) -> f64 {
        self.rho * (1.0 - self.rho)
    }

    /// Drift magnitude `alpha |1 - 2 rho|`.
    #[inline]
    pub fn drift(&self) -> f64 {
        self.alpha * (1.0 - 2.0 * self.rho).abs()
    }

    /// Signed transport velocity `alpha (1 - 2 rho)`.
    #[inline]
    pub fn velocity(&self) -> f64 {
        self.alpha * (1.0 - 2.0 * self.rho)
    }

    /// The sub regime at rho = 1/2 has identically vanishing covariance.
    pub fn is_degenerate(&self) -> bool {
        self.regime == Regime::Sub && self.drift() == 0.0
    }
}

/// Drift-corrected variance profile
/// `f(t) = m t / 2 + E[(B_t - m t)_+]`, in closed form
/// `m t / 2 + sqrt(t) [pdf(m sqrt t) - m sqrt(t) (1 - cdf(m sqrt t))]`.
pub fn f_drift(t: f64, m: f64) -> f64 {
    assert!(t >= 0.0 && m >= 0.0);
    if t == 0.0 {
        return 0.0;
    }
    let ms = m * t.sqrt();
    0.5 * m * t + t.sqrt() * (normal_pdf(ms) - ms * (1.0 - normal_cdf(ms)))
}

/// Limiting covariance `a(t, s)` of the centred current, per regime.
pub fn current_cov(t: f64, s: f64, spec: &VarianceSpec) -> f64 {
    assert!(t >= 0.0 && s >= 0.0);
    let chi = spec.chi();
    match spec.regime {
        Regime::Sub => chi * spec.drift() * t.min(s),
        Regime::Critical => {
            let m = spec.drift();
            chi * (f_drift(t, m) + f_drift(s, m) - f_drift((t - s).abs(), m))
        }
        Regime::Super => chi * (t.sqrt() + s.sqrt() - (t - s).abs().sqrt()) / SQRT_2PI,
    }
}

/// Covariance of fractional Brownian motion with Hurst parameter 1/4,
/// normalised to unit variance at t = 1.
#[inline]
pub fn fbm_cov(t: f64, s: f64) -> f64 {
    assert!(t >= 0.0 && s >= 0.0);
    0.5 * (t.sqrt() + s.sqrt() - (t - s).abs().sqrt())
}
