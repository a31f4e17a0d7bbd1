//! Field pairings and the exact lattice identities.

use crate::error::{Error, Result};
use crate::process::{Configuration, ProcessParams, SimState};

/// Density fluctuation field `n^{-1/2} sum_x (eta_x - rho) f(x/n)` over the
/// sites where `f` is supported. The support must fit strictly inside the
/// macroscopic ring window `(-L/(2n), L/(2n))`.
pub fn fluctuation_field(
    config: &Configuration,
    params: &ProcessParams,
    f: impl Fn(f64) -> f64,
    support: (f64, f64),
) -> Result<f64> {
    let scaled = scaled_field_sum(config, params, f, support)?;
    Ok(scaled / (params.n as f64).sqrt())
}

/// Rescaled field: the same pairing with prefactor `1/a_n`.
pub fn rescaled_field(
    config: &Configuration,
    params: &ProcessParams,
    f: impl Fn(f64) -> f64,
    support: (f64, f64),
    a_n: f64,
) -> Result<f64> {
    if a_n <= 0.0 {
        return Err(Error::NonPositiveScale(a_n));
    }
    let scaled = scaled_field_sum(config, params, f, support)?;
    Ok(scaled / a_n)
}

/// `sum_x (eta_x - rho) f(x/n)` over the integer sites in the support.
fn scaled_field_sum(
    config: &Configuration,
    params: &ProcessParams,
    f: impl Fn(f64) -> f64,
    support: (f64, f64),
) -> Result<f64> {
    let (lo, hi) = support;
    let win = params.field_window();
    if lo <= -win || hi >= win {
        return Err(Error::SupportExceedsWindow { lo, hi, win });
    }
    let nf = params.n as f64;
    let x_lo = (lo * nf).ceil() as i64;
    let x_hi = (hi * nf).floor() as i64;
    let mut acc = 0.0;
    for x in x_lo..=x_hi {
        let w = f(x as f64 / nf);
        if w != 0.0 {
            let eta = config.occupied_math(x, params) as u8 as f64;
            acc += (eta - params.rho) * w;
        }
    }
    Ok(acc)
}

/// Exact conservation identity between the density-field increment paired
/// with the ramp of width `l` and the bond currents:
/// `sum_x G_l(x/n) [eta_x(t) - eta_x(0)]` must equal
/// `J_{-1,0}(t) - (1/(nl)) sum_{x=0}^{nl-1} J_{x,x+1}(t)`.
/// Both sides are multiplied by `n l`, making the comparison pure integer
/// arithmetic: `n l G_l(x/n) = n l - x` on `0 <= x <= n l`.
pub fn conservation_identity_check(
    state_t: &SimState,
    state_0: &SimState,
    params: &ProcessParams,
    l: u32,
) -> Result<bool> {
    let nl = params.n as i64 * l as i64;
    if 2 * nl >= params.ring_size as i64 {
        return Err(Error::InvalidParams(format!(
            "ramp width n*l = {nl} reaches around the ring (L = {})",
            params.ring_size
        )));
    }
    if !state_t.tracks_all_bonds() {
        return Err(Error::UntrackedBond(0, 1));
    }
    let cfg_t = state_t.config();
    let cfg_0 = state_0.config();
    let mut lhs: i64 = 0;
    for x in 0..=nl {
        let d = cfg_t.occupied_math(x, params) as i64 - cfg_0.occupied_math(x, params) as i64;
        lhs += (nl - x) * d;
    }
    let mut bond_sum: i64 = 0;
    for x in 0..nl {
        bond_sum += state_t.bond_current(x, params)?;
    }
    let rhs = nl * state_t.origin_current() - bond_sum;
    Ok(lhs == rhs)
}

/// Exact ordering identity between the origin current and the tagged
/// particle: when `J >= 0` the current equals the occupation count on
/// `[0, X-1]`; when `J < 0` it equals minus the count on `[X, -1]`.
pub fn tagged_current_identity_check(state: &SimState, params: &ProcessParams) -> Result<bool> {
    let x_t = state.tagged_position()?;
    if 2 * x_t.abs() >= params.ring_size as i64 {
        return Err(Error::RingBreach {
            displacement: x_t,
            limit: params.ring_size as i64 / 2,
        });
    }
    let cfg = state.config();
    let j = state.origin_current();
    if j >= 0 {
        if x_t < 0 {
            return Ok(false);
        }
        let count: i64 = (0..x_t).map(|x| cfg.occupied_math(x, params) as i64).sum();
        Ok(j == count)
    } else {
        if x_t >= 0 {
            return Ok(false);
        }
        let count: i64 = (x_t..0).map(|x| cfg.occupied_math(x, params) as i64).sum();
        Ok(j == -count)
    }
}
