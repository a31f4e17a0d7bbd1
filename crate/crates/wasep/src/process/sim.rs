//! The kinetic Monte Carlo engine.
//!
//! Uniformization with rejection: the total attempt rate `N (p + q)` is
//! constant because the particle number is conserved, so the number of
//! attempts in a sampling window is Poisson with mean `rate * dt` and the
//! attempts themselves are an iid sequence of (particle, direction) draws.
//! Blocked attempts are genuine null events of the generator. Everything
//! the state exposes is sampled at window boundaries, so marginalising the
//! attempt times inside a window leaves the law of the process untouched.

use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_distr::Poisson;

use crate::error::{Error, Result};
use crate::process::{Configuration, ProcessParams};
use crate::rng::SimRng;

const EMPTY: u32 = u32::MAX;

/// Tagged-particle bookkeeping: index into the particle list plus the
/// unwrapped position on the integer line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaggedState {
    particle: u32,
    position: i64,
}

impl TaggedState {
    /// Unwrapped position on the integer line.
    pub fn position(&self) -> i64 {
        self.position
    }
}

/// Full simulation state: configuration, particle index, clock, current
/// counters, tagged particle and the owned random stream.
#[derive(Debug, Clone)]
pub struct SimState {
    occupancy: Vec<u8>,
    positions: Vec<u32>,
    site_index: Vec<u32>,
    time: f64,
    origin_current: i64,
    bond_currents: Option<Vec<i64>>,
    tagged: Option<TaggedState>,
    rng: SimRng,
}

impl SimState {
    /// Fresh state at time 0 from the product measure (conditioned on an
    /// origin particle when `tagged` is set). `track_all_bonds` switches on
    /// the per-bond counters needed by the conservation identity.
    pub fn new(
        params: &ProcessParams,
        seed: u64,
        tagged: bool,
        track_all_bonds: bool,
    ) -> Result<SimState> {
        params.validate()?;
        let mut rng = SimRng::seed_from_u64(seed);
        let config = Configuration::sample(params, &mut rng, tagged);
        SimState::from_config(params, config, rng, tagged, track_all_bonds)
    }

    /// State at time 0 from an explicit configuration and random stream.
    pub fn from_config(
        params: &ProcessParams,
        config: Configuration,
        rng: SimRng,
        tagged: bool,
        track_all_bonds: bool,
    ) -> Result<SimState> {
        let l = params.ring_size as usize;
        if config.ring_size() != l {
            return Err(Error::InvalidParams(
                "configuration ring size does not match parameters".into(),
            ));
        }
        let occupancy = config.occupancy().to_vec();
        let mut positions = Vec::with_capacity(config.particle_count());
        let mut site_index = vec![EMPTY; l];
        for (site, &occ) in occupancy.iter().enumerate() {
            if occ == 1 {
                site_index[site] = positions.len() as u32;
                positions.push(site as u32);
            }
        }
        let tagged_state = if tagged {
            let origin = l / 2;
            if occupancy[origin] != 1 {
                return Err(Error::InvalidParams(
                    "tagged tracking requires a particle at the origin".into(),
                ));
            }
            Some(TaggedState { particle: site_index[origin], position: 0 })
        } else {
            None
        };
        Ok(SimState {
            occupancy,
            positions,
            site_index,
            time: 0.0,
            origin_current: 0,
            bond_currents: track_all_bonds.then(|| vec![0i64; l]),
            tagged: tagged_state,
            rng,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Net signed crossings of the bond `(-1, 0)` since time 0.
    pub fn origin_current(&self) -> i64 {
        self.origin_current
    }

    /// Net signed crossings of the bond `(x, x+1)`; requires full tracking
    /// other than for the origin bond.
    pub fn bond_current(&self, x: i64, params: &ProcessParams) -> Result<i64> {
        let internal = params.internal_site(x);
        if internal == params.origin_bond() {
            return Ok(self.origin_current);
        }
        match &self.bond_currents {
            Some(bc) => Ok(bc[internal]),
            None => Err(Error::UntrackedBond(x, x + 1)),
        }
    }

    pub fn tracks_all_bonds(&self) -> bool {
        self.bond_currents.is_some()
    }

    pub fn tagged(&self) -> Option<&TaggedState> {
        self.tagged.as_ref()
    }

    /// Unwrapped tagged position; errors when tracking is off.
    pub fn tagged_position(&self) -> Result<i64> {
        self.tagged.map(|t| t.position).ok_or(Error::TaggedDisabled)
    }

    pub fn particle_count(&self) -> usize {
        self.positions.len()
    }

    /// Snapshot of the occupancy as a [`Configuration`].
    pub fn config(&self) -> Configuration {
        Configuration::from_occupancy(self.occupancy.clone())
    }

    pub fn occupancy(&self) -> &[u8] {
        &self.occupancy
    }

    /// Centred current `J(t) - t alpha n^{gamma-beta} chi`.
    pub fn centered_current(&self, params: &ProcessParams) -> f64 {
        self.origin_current as f64 - params.current_centering(self.time)
    }

    /// Centred tagged position `X(t) - t alpha n^{gamma-beta} (1 - rho)`.
    pub fn centered_tagged(&self, params: &ProcessParams) -> Result<f64> {
        Ok(self.tagged_position()? as f64 - params.tagged_centering(self.time))
    }

    /// Evolve the state to macroscopic time `t_target` under the exact
    /// process law. Fails with [`Error::RingBreach`] if the tagged particle
    /// wanders further than `L/4` from the origin.
    pub fn advance(&mut self, params: &ProcessParams, t_target: f64) -> Result<()> {
        if t_target < self.time {
            return Err(Error::InvalidParams(format!(
                "cannot advance backwards: {} -> {}",
                self.time, t_target
            )));
        }
        let l = params.ring_size as usize;
        debug_assert_eq!(self.occupancy.len(), l);
        let n_particles = self.positions.len();
        // fully jammed or empty rings never accept a jump
        if n_particles == 0 || n_particles == l {
            self.time = t_target;
            return Ok(());
        }
        let p = params.right_rate();
        let q = params.left_rate();
        let total_rate = n_particles as f64 * (p + q);
        let window = t_target - self.time;
        let mean_events = total_rate * window;
        let events = if mean_events > 0.0 {
            Poisson::new(mean_events)
                .map_err(|e| Error::InvalidParams(format!("event count: {e}")))?
                .sample(&mut self.rng) as u64
        } else {
            0
        };
        // right-direction threshold on a raw 64-bit draw
        let dir_threshold = ((p / (p + q)) * 2.0f64.powi(64)) as u64;
        let breach_limit = (params.ring_size / 4) as i64;
        let origin_bond = params.origin_bond();

        // hot loop: everything mutable lives in locals
        let occupancy = &mut self.occupancy[..];
        let positions = &mut self.positions[..];
        let site_index = &mut self.site_index[..];
        let mut bonds = self.bond_currents.as_deref_mut();
        let mut origin_current = self.origin_current;
        let (tagged_particle, mut tagged_position) = match self.tagged {
            Some(t) => (t.particle as usize, t.position),
            None => (usize::MAX, 0),
        };
        let mut breach = None;

        for _ in 0..events {
            // particle pick: multiply-shift on a full 64-bit draw
            let r1: u64 = self.rng.gen();
            let particle = ((r1 as u128 * n_particles as u128) >> 64) as usize;
            let r2: u64 = self.rng.gen();
            let right = r2 < dir_threshold;

            let src = positions[particle] as usize;
            let (dst, bond, delta) = if right {
                let dst = if src + 1 == l { 0 } else { src + 1 };
                (dst, src, 1i64)
            } else {
                let dst = if src == 0 { l - 1 } else { src - 1 };
                (dst, dst, -1i64)
            };
            if occupancy[dst] != 0 {
                continue; // exclusion: null event
            }
            occupancy[src] = 0;
            occupancy[dst] = 1;
            site_index[dst] = particle as u32;
            site_index[src] = EMPTY;
            positions[particle] = dst as u32;
            if bond == origin_bond {
                origin_current += delta;
            }
            if let Some(b) = bonds.as_deref_mut() {
                b[bond] += delta;
            }
            if particle == tagged_particle {
                tagged_position += delta;
                if tagged_position.abs() > breach_limit {
                    breach = Some(tagged_position);
                    break;
                }
            }
        }

        self.origin_current = origin_current;
        if let Some(t) = self.tagged.as_mut() {
            t.position = tagged_position;
        }
        if let Some(displacement) = breach {
            return Err(Error::RingBreach { displacement, limit: breach_limit });
        }
        self.time = t_target;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params() -> ProcessParams {
        ProcessParams::new(10, 1.0, 2.0, 0.3, 1.0).unwrap()
    }

    // states are confined to one worker at a time but transferable
    #[test]
    fn sim_state_is_transferable_between_threads() {
        fn assert_send<T: Send>() {}
        assert_send::<SimState>();
        assert_send::<ProcessParams>();
        let p = small_params();
        let mut s = SimState::new(&p, 1, false, false).unwrap();
        let handle = std::thread::spawn(move || {
            s.advance(&p, 0.2).unwrap();
            s.origin_current()
        });
        handle.join().unwrap();
    }

    #[test]
    fn advance_rejects_backward_targets() {
        let p = small_params();
        let mut s = SimState::new(&p, 1, false, false).unwrap();
        s.advance(&p, 0.5).unwrap();
        assert!(s.advance(&p, 0.4).is_err());
    }

    #[test]
    fn particle_count_is_conserved() {
        let p = small_params();
        let mut s = SimState::new(&p, 3, false, false).unwrap();
        let n0 = s.particle_count();
        for k in 1..=5 {
            s.advance(&p, k as f64 * 0.2).unwrap();
            assert_eq!(s.particle_count(), n0);
            let recount: usize = s.occupancy().iter().map(|&b| b as usize).sum();
            assert_eq!(recount, n0);
        }
    }

    #[test]
    fn occupancies_remain_binary_and_indexed() {
        let p = small_params();
        let mut s = SimState::new(&p, 17, true, true).unwrap();
        s.advance(&p, 0.7).unwrap();
        for (site, &occ) in s.occupancy().iter().enumerate() {
            assert!(occ == 0 || occ == 1);
            if occ == 1 {
                let idx = s.site_index[site];
                assert_eq!(s.positions[idx as usize] as usize, site);
            } else {
                assert_eq!(s.site_index[site], EMPTY);
            }
        }
    }

    #[test]
    fn full_ring_never_moves() {
        let p = ProcessParams::new(10, 1.0, 2.0, 1.0, 1.0).unwrap();
        let mut s = SimState::new(&p, 5, false, true).unwrap();
        s.advance(&p, 1.0).unwrap();
        assert_eq!(s.origin_current(), 0);
        assert!(s.bond_currents.as_ref().unwrap().iter().all(|&c| c == 0));
        assert_eq!(s.time(), 1.0);
    }

    #[test]
    fn empty_ring_changes_nothing() {
        let p = ProcessParams::new(10, 1.0, 2.0, 0.0, 1.0).unwrap();
        let mut s = SimState::new(&p, 5, false, false).unwrap();
        s.advance(&p, 1.0).unwrap();
        assert_eq!(s.origin_current(), 0);
        assert_eq!(s.particle_count(), 0);
    }

    #[test]
    fn deterministic_given_seed_and_windows() {
        let p = small_params();
        let mut a = SimState::new(&p, 11, true, true).unwrap();
        let mut b = SimState::new(&p, 11, true, true).unwrap();
        for k in 1..=4 {
            let t = k as f64 * 0.25;
            a.advance(&p, t).unwrap();
            b.advance(&p, t).unwrap();
        }
        assert_eq!(a.occupancy(), b.occupancy());
        assert_eq!(a.origin_current(), b.origin_current());
        assert_eq!(a.tagged_position().unwrap(), b.tagged_position().unwrap());
    }

    #[test]
    fn tagged_site_stays_occupied() {
        let p = small_params();
        let mut s = SimState::new(&p, 23, true, false).unwrap();
        for k in 1..=5 {
            s.advance(&p, k as f64 * 0.2).unwrap();
            let x = s.tagged_position().unwrap();
            assert!(s.config().occupied_math(x, &p), "tagged site empty at {x}");
        }
    }

    #[test]
    fn centered_observables_at_time_zero() {
        let p = small_params();
        let s = SimState::new(&p, 2, true, false).unwrap();
        assert_eq!(s.centered_current(&p), 0.0);
        assert_eq!(s.centered_tagged(&p).unwrap(), 0.0);
    }

    #[test]
    fn tagged_disabled_errors() {
        let p = small_params();
        let s = SimState::new(&p, 2, false, false).unwrap();
        assert!(matches!(s.centered_tagged(&p), Err(Error::TaggedDisabled)));
        assert!(s.tagged_position().is_err());
    }

    #[test]
    fn untracked_bond_errors() {
        let p = small_params();
        let s = SimState::new(&p, 2, false, false).unwrap();
        assert!(s.bond_current(3, &p).is_err());
        // the origin bond is always available
        assert_eq!(s.bond_current(-1, &p).unwrap(), 0);
    }

    // Symmetric dynamics: ensemble mean of the origin current vanishes
    // within Monte Carlo error.
    #[test]
    fn symmetric_current_mean_is_zero() {
        let p = ProcessParams::new(20, 0.0, 2.0, 0.3, 0.5).unwrap();
        let reps = 400;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for seed in 0..reps {
            let mut s = SimState::new(&p, crate::rng::replica_seed(0xA0, seed), false, false)
                .unwrap();
            s.advance(&p, 0.5).unwrap();
            let j = s.origin_current() as f64;
            sum += j;
            sumsq += j * j;
        }
        let mean = sum / reps as f64;
        let var = sumsq / reps as f64 - mean * mean;
        let se = (var / reps as f64).sqrt();
        assert!(mean.abs() <= 4.0 * se, "mean {mean} vs se {se}");
    }

    // Reversal symmetry: without asymmetry the law of the origin current
    // is symmetric, so its empirical skewness stays within four standard
    // errors of zero.
    #[test]
    fn symmetric_current_has_no_skew() {
        let p = ProcessParams::new(20, 0.0, 2.0, 0.3, 0.5).unwrap();
        let reps = 600usize;
        let mut js = Vec::with_capacity(reps);
        for seed in 0..reps {
            let mut s =
                SimState::new(&p, crate::rng::replica_seed(0xA7, seed as u64), false, false)
                    .unwrap();
            s.advance(&p, 0.5).unwrap();
            js.push(s.origin_current() as f64);
        }
        let n = reps as f64;
        let mean = js.iter().sum::<f64>() / n;
        let m2 = js.iter().map(|j| (j - mean).powi(2)).sum::<f64>() / n;
        let m3 = js.iter().map(|j| (j - mean).powi(3)).sum::<f64>() / n;
        let skew = m3 / m2.powf(1.5);
        let se = (6.0 / n).sqrt();
        assert!(skew.abs() <= 4.0 * se, "skew {skew} vs se {se}");
    }

    // Stationarity: occupation frequency of a fixed site at a fixed time
    // stays Bernoulli(rho) over replicas.
    #[test]
    fn stationary_occupation_frequency() {
        let p = ProcessParams::new(20, 1.0, 2.0, 0.3, 0.5).unwrap();
        let reps = 2000;
        let mut count = 0u32;
        for seed in 0..reps {
            let mut s = SimState::new(&p, crate::rng::replica_seed(0xB1, seed), false, false)
                .unwrap();
            s.advance(&p, 0.3).unwrap();
            count += s.config().occupied_math(2, &p) as u32;
        }
        let freq = count as f64 / reps as f64;
        let se = (0.3 * 0.7 / reps as f64).sqrt();
        assert!((freq - 0.3).abs() <= 4.0 * se, "freq {freq}");
    }
}
