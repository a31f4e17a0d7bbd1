//! Field-level cost functionals and their consistency with the
//! finite-dimensional current rates.

use crate::error::{Error, Result};
use crate::rates::quadratic::finite_dim_rate;
use crate::theory::covmat::CovMatrix;
use crate::theory::grid::{GridFunction, SpaceTimeGridFunction};
use crate::theory::semigroup::field_increment_cov;
use crate::theory::transport::macroscopic_current;
use crate::theory::variance::{Regime, VarianceSpec};

/// Cost of deviating the initial profile: `|phi|^2 / (2 chi)`.
pub fn initial_cost(phi: &GridFunction, rho: f64) -> Result<f64> {
    let chi = rho * (1.0 - rho);
    if chi == 0.0 {
        return Err(Error::DegenerateDensity(rho));
    }
    Ok(phi.l2_norm_sq() / (2.0 * chi))
}

/// Cost of the dynamic forcing: the space-time Dirichlet energy over
/// `2 chi`; identically zero in the sub regime where the forcing does not
/// act.
pub fn dynamic_cost(g: &SpaceTimeGridFunction, spec: &VarianceSpec) -> Result<f64> {
    let chi = spec.chi();
    if chi == 0.0 {
        return Err(Error::DegenerateDensity(spec.rho));
    }
    if spec.regime == Regime::Sub {
        return Ok(0.0);
    }
    Ok(g.dirichlet_energy() / (2.0 * chi))
}

/// Covariance matrix of the field increments `Y_{t_i}(G) - Y_0(G)` over a
/// time grid.
pub fn increment_cov_matrix(
    g: &GridFunction,
    times: &[f64],
    spec: &VarianceSpec,
) -> Result<CovMatrix> {
    if times.is_empty() || times[0] <= 0.0 || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "times must be strictly increasing and positive".into(),
        ));
    }
    let m = times.len();
    let mut data = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let v = field_increment_cov(g, times[i], times[j], spec);
            data[i * m + j] = v;
            data[j * m + i] = v;
        }
    }
    CovMatrix::from_entries(times.to_vec(), data)
}

/// Legendre-transform rate `sup_xi { xi . r - 1/2 xi^T S xi }`: equals
/// `1/2 r^T S^{-1} r` for invertible `S`, and for singular `S` the
/// pseudo-inverse value when `r` lies in the range, `+inf` otherwise.
pub fn legendre_rate(r: &[f64], sigma: &CovMatrix) -> Result<f64> {
    Ok(0.5 * sigma.pseudo_quad_form(r)?)
}

/// Verdict of [`cost_dominates_rate`] with its ingredients, for reporting.
#[derive(Debug, Clone)]
pub struct DominationCheck {
    pub cost: f64,
    pub rate: f64,
    pub transported: Vec<f64>,
    pub holds: bool,
}

/// Sub-regime inequality between the field-level cost of an initial
/// profile and the finite-dimensional rate of the currents it transports:
/// `|phi|^2/(2 chi) >= 1/2 r^T A^{-1} r` with
/// `r_i = int_{-v t_i}^0 phi` and `A` the sub-regime current covariance.
/// The tolerance `1e-9` absorbs quadrature noise.
pub fn cost_dominates_rate(
    phi: &GridFunction,
    times: &[f64],
    spec: &VarianceSpec,
) -> Result<DominationCheck> {
    if spec.regime != Regime::Sub {
        return Err(Error::InvalidParams(
            "the closed-form domination check is a sub-regime statement".into(),
        ));
    }
    if spec.drift() == 0.0 {
        return Err(Error::DegenerateSubVariance);
    }
    let transported: Vec<f64> = times
        .iter()
        .map(|&t| macroscopic_current(phi, None, t, spec))
        .collect::<Result<_>>()?;
    let a = CovMatrix::from_times(times, spec)?;
    let rate = finite_dim_rate(&transported, &a)?;
    let cost = initial_cost(phi, spec.rho)?;
    Ok(DominationCheck {
        cost,
        rate,
        transported,
        holds: cost >= rate - 1e-9,
    })
}
