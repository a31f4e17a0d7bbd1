//! Finite-dimensional quadratic-form rates.

use crate::error::{Error, Result};
use crate::rates::GridPath;
use crate::theory::covmat::CovMatrix;
use crate::theory::variance::{Regime, VarianceSpec};

/// `1/2 r^T A^{-1} r` via the cached triangular factor (no explicit
/// inverse). Errors when the matrix is rank-deficient, identifying the
/// degenerate regime.
pub fn finite_dim_rate(r: &[f64], a: &CovMatrix) -> Result<f64> {
    Ok(0.5 * a.quad_form(r)?)
}

/// Critical-regime grid values of the variational rate: `1/2 h^T A^{-1} h`
/// on each grid of a refining family, together with their infimum and
/// supremum. Both extremes are reported because grid refinement is
/// monotone for Gaussian quadratic forms while the variational definition
/// is stated as an infimum.
pub fn critical_grid_rate(
    h: &GridPath,
    grids: &[Vec<f64>],
    spec: &VarianceSpec,
) -> Result<(Vec<f64>, f64, f64)> {
    if spec.regime != Regime::Critical {
        return Err(Error::InvalidParams(
            "grid variational rate is defined for the critical regime".into(),
        ));
    }
    if grids.is_empty() {
        return Err(Error::InvalidParams("no grids supplied".into()));
    }
    for w in grids.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        if !prev.iter().all(|t| next.iter().any(|u| u == t)) {
            return Err(Error::InvalidParams(
                "grids must refine: each grid must contain the previous one".into(),
            ));
        }
    }
    let mut values = Vec::with_capacity(grids.len());
    for grid in grids {
        let a = CovMatrix::from_times(grid, spec)?;
        let hv: Vec<f64> = grid.iter().map(|&t| h.eval(t)).collect();
        values.push(0.5 * a.quad_form(&hv)?);
    }
    let inf = values.iter().copied().fold(f64::INFINITY, f64::min);
    let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((values, inf, sup))
}
