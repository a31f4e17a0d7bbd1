//! Parallel replica execution.
//!
//! Replicas are embarrassingly parallel: replica `i` owns the generator
//! seeded by `replica_seed(master_seed, i)` and nothing else is shared.
//! Results are collected in replica order, so aggregated statistics do not
//! depend on the degree of parallelism.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::process::{rescaled_field, ObservableSeries, ProcessParams, SimState};
use crate::rng::replica_seed;

/// Environment variable overriding the worker count (default: all logical
/// cores).
pub const WORKERS_ENV: &str = "WASEP_WORKERS";

/// Outcome of one ensemble run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleResult {
    /// one series per replica that completed, in replica order
    pub series: Vec<ObservableSeries>,
    /// replica ids that hit the ring-approximation guard
    pub breached: Vec<u64>,
}

impl EnsembleResult {
    pub fn breach_count(&self) -> usize {
        self.breached.len()
    }
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let workers: usize = v
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV} must be a positive integer")))?;
        if workers == 0 {
            return Err(Error::Config(format!("{WORKERS_ENV} must be positive")));
        }
        builder = builder.num_threads(workers);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// Run every replica of the experiment. Replicas that breach the ring
/// guard are recorded and skipped; everything else is deterministic in
/// `(params, master_seed, sample_times)`.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let params = config.process.params()?;
    run_ensemble_with(config, &params)
}

/// As [`run_ensemble`] with explicit parameters (used by the ring-doubling
/// diagnostic to rerun at `2L`).
pub fn run_ensemble_with(
    config: &ExperimentConfig,
    params: &ProcessParams,
) -> Result<EnsembleResult> {
    let test_functions: Vec<_> = config
        .field_test_functions
        .iter()
        .map(|f| f.build())
        .collect::<Result<_>>()?;
    let a_n = config.a_n();
    let pool = worker_pool()?;
    let outcomes: Vec<Result<ObservableSeries>> = pool.install(|| {
        (0..config.replicas)
            .into_par_iter()
            .map(|replica| run_replica(config, params, &test_functions, a_n, replica))
            .collect()
    });
    let mut series = Vec::with_capacity(outcomes.len());
    let mut breached = Vec::new();
    for (replica, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(s) => series.push(s),
            Err(Error::RingBreach { .. }) => breached.push(replica as u64),
            Err(e) => return Err(e),
        }
    }
    Ok(EnsembleResult { series, breached })
}

fn run_replica(
    config: &ExperimentConfig,
    params: &ProcessParams,
    test_functions: &[crate::theory::grid::GridFunction],
    a_n: f64,
    replica: u64,
) -> Result<ObservableSeries> {
    let seed = replica_seed(config.master_seed, replica);
    let tagged = config.observables.tagged;
    let mut state = SimState::new(params, seed, tagged, false)?;
    let nt = config.sample_times.len();
    let mut centered_current = Vec::with_capacity(nt);
    let mut centered_tagged = tagged.then(|| Vec::with_capacity(nt));
    let mut field_values = vec![Vec::with_capacity(nt); test_functions.len()];
    for &t in &config.sample_times {
        state.advance(params, t)?;
        centered_current.push(state.centered_current(params));
        if let Some(ct) = centered_tagged.as_mut() {
            ct.push(state.centered_tagged(params)?);
        }
        if config.observables.field {
            let cfg = state.config();
            for (k, g) in test_functions.iter().enumerate() {
                let v = rescaled_field(&cfg, params, |u| g.eval(u), g.support(), a_n)?;
                field_values[k].push(v);
            }
        }
    }
    Ok(ObservableSeries {
        replica_id: replica,
        seed,
        sample_times: config.sample_times.clone(),
        centered_current,
        centered_tagged,
        field_values,
    })
}
