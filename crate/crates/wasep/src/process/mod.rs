//! Exact continuous-time simulation of the weakly asymmetric simple
//! exclusion process on a periodic ring, with bit-exact tracking of bond
//! currents, the tagged particle and density fields.
//!
//! Sites carry at most one particle. Each particle attempts right jumps at
//! rate `n^gamma (1/2 + alpha n^-beta)` and left jumps at rate
//! `n^gamma / 2`; attempts onto occupied sites are null events, which is
//! exact for exclusion dynamics. Internally sites are indexed `0..L` with
//! the mathematical coordinate `x = i - L/2`, so the origin sits at `L/2`
//! and the bond `(-1, 0)` has internal index `L/2 - 1`.

mod observables;
mod sim;

pub use observables::{
    conservation_identity_check, fluctuation_field, rescaled_field, tagged_current_identity_check,
};
pub use sim::{SimState, TaggedState};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::theory::variance::VarianceSpec;

/// Ring sizing safety factor: diffusive spreading (`~ n sqrt(T)` sites) and
/// drift transport (`~ alpha n T` sites in the worst regime) must stay far
/// from the wrap-around.
pub const RING_SAFETY_FACTOR: f64 = 8.0;
/// Minimum ring size regardless of parameters.
pub const RING_MINIMUM: u32 = 1024;

/// Model constants for one process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams {
    /// scale parameter n
    pub n: u32,
    /// asymmetry strength alpha >= 0
    pub alpha: f64,
    /// weak-asymmetry exponent beta >= 0
    pub beta: f64,
    /// particle density rho in [0, 1]
    pub rho: f64,
    /// ring size L (even)
    pub ring_size: u32,
    /// macroscopic time horizon T
    pub horizon: f64,
}

impl ProcessParams {
    /// Parameters with the default ring size.
    pub fn new(n: u32, alpha: f64, beta: f64, rho: f64, horizon: f64) -> Result<ProcessParams> {
        let ring_size = ProcessParams::default_ring_size(n, alpha, horizon);
        ProcessParams::with_ring_size(n, alpha, beta, rho, horizon, ring_size)
    }

    /// Parameters with an explicit ring size (still subject to the floor).
    pub fn with_ring_size(
        n: u32,
        alpha: f64,
        beta: f64,
        rho: f64,
        horizon: f64,
        ring_size: u32,
    ) -> Result<ProcessParams> {
        let params = ProcessParams { n, alpha, beta, rho, ring_size, horizon };
        params.validate()?;
        Ok(params)
    }

    /// `max(ceil(8 n sqrt T), ceil(8 alpha n T), 1024)`, rounded up to even.
    pub fn default_ring_size(n: u32, alpha: f64, horizon: f64) -> u32 {
        let nf = n as f64;
        let diffusive = (RING_SAFETY_FACTOR * nf * horizon.sqrt()).ceil();
        let drift = (RING_SAFETY_FACTOR * alpha * nf * horizon).ceil();
        let l = diffusive.max(drift).max(RING_MINIMUM as f64) as u32;
        l + (l & 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        if !(self.alpha >= 0.0) || !(self.beta >= 0.0) {
            return Err(Error::InvalidParams("alpha and beta must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidParams(format!("rho = {} outside [0, 1]", self.rho)));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidParams("horizon must be positive".into()));
        }
        if self.ring_size % 2 != 0 {
            return Err(Error::InvalidParams("ring size must be even".into()));
        }
        let floor = ProcessParams::default_ring_size(self.n, self.alpha, self.horizon);
        if self.ring_size < floor {
            return Err(Error::InvalidParams(format!(
                "ring size {} below the safety floor {} for n = {}, alpha = {}, T = {}",
                self.ring_size, floor, self.n, self.alpha, self.horizon
            )));
        }
        Ok(())
    }

    /// Time-scale exponent `gamma = min(1 + beta, 2)`.
    #[inline]
    pub fn gamma(&self) -> f64 {
        (1.0 + self.beta).min(2.0)
    }

    /// Static compressibility `chi = rho (1 - rho)`.
    #[inline]
    pub fn chi(&self) -> f64 {
        self.rho * (1.0 - self.rho)
    }

    /// Per-particle right-jump rate `n^gamma (1/2 + alpha n^-beta)`.
    pub fn right_rate(&self) -> f64 {
        let nf = self.n as f64;
        nf.powf(self.gamma()) * (0.5 + self.alpha * nf.powf(-self.beta))
    }

    /// Per-particle left-jump rate `n^gamma / 2`.
    pub fn left_rate(&self) -> f64 {
        0.5 * (self.n as f64).powf(self.gamma())
    }

    /// Drift scale `alpha n^{gamma - beta}` entering the centering terms.
    pub fn drift_scale(&self) -> f64 {
        self.alpha * (self.n as f64).powf(self.gamma() - self.beta)
    }

    /// Centering of the origin current at time `t`.
    pub fn current_centering(&self, t: f64) -> f64 {
        t * self.drift_scale() * self.chi()
    }

    /// Centering of the tagged position at time `t`.
    pub fn tagged_centering(&self, t: f64) -> f64 {
        t * self.drift_scale() * (1.0 - self.rho)
    }

    /// Macroscopic half-window `L / (2n)` available for test functions.
    pub fn field_window(&self) -> f64 {
        self.ring_size as f64 / (2.0 * self.n as f64)
    }

    /// The limiting-covariance parameters matching these dynamics.
    pub fn variance_spec(&self) -> VarianceSpec {
        VarianceSpec::from_beta(self.beta, self.alpha, self.rho)
    }

    /// Internal site index of mathematical coordinate `x` (reduced mod L).
    #[inline]
    pub fn internal_site(&self, x: i64) -> usize {
        let l = self.ring_size as i64;
        (((x + l / 2) % l + l) % l) as usize
    }

    /// Internal index of the bond `(-1, 0)`.
    #[inline]
    pub fn origin_bond(&self) -> usize {
        (self.ring_size / 2 - 1) as usize
    }
}

/// Ring occupancy with its particle count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    occupancy: Vec<u8>,
    particle_count: usize,
}

impl Configuration {
    /// Product-measure sample: each site independently occupied with
    /// probability `rho`; with `tagged`, the origin is forced occupied and
    /// all other sites stay independent.
    pub fn sample(params: &ProcessParams, rng: &mut SimRng, tagged: bool) -> Configuration {
        use rand::Rng;
        let l = params.ring_size as usize;
        let mut occupancy = vec![0u8; l];
        for site in occupancy.iter_mut() {
            *site = (rng.gen::<f64>() < params.rho) as u8;
        }
        if tagged {
            occupancy[l / 2] = 1;
        }
        let particle_count = occupancy.iter().map(|&b| b as usize).sum();
        Configuration { occupancy, particle_count }
    }

    /// Occupancy (0/1) by internal site index.
    pub fn occupancy(&self) -> &[u8] {
        &self.occupancy
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn ring_size(&self) -> usize {
        self.occupancy.len()
    }

    /// Occupancy by mathematical coordinate (reduced mod L).
    pub fn occupied_math(&self, x: i64, params: &ProcessParams) -> bool {
        self.occupancy[params.internal_site(x)] == 1
    }

    pub(crate) fn from_occupancy(occupancy: Vec<u8>) -> Configuration {
        let particle_count = occupancy.iter().map(|&b| b as usize).sum();
        Configuration { occupancy, particle_count }
    }
}

/// Product-measure initial configuration, deterministic in the seed.
pub fn sample_initial(params: &ProcessParams, seed: u64, tagged: bool) -> Configuration {
    use rand::SeedableRng;
    let mut rng = SimRng::seed_from_u64(seed);
    Configuration::sample(params, &mut rng, tagged)
}

/// Per-replica sampled time series of the tracked observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub replica_id: u64,
    pub seed: u64,
    pub sample_times: Vec<f64>,
    pub centered_current: Vec<f64>,
    pub centered_tagged: Option<Vec<f64>>,
    /// one series per field test function, indexed `[function][time]`
    pub field_values: Vec<Vec<f64>>,
}
