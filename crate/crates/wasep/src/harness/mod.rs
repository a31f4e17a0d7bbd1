//! Ensemble orchestration, statistics, verification suites, persistence
//! and the experiment driver behind the command-line interface.

pub mod config;
pub mod ensemble;
pub mod output;
pub mod stats;
pub mod suites;

pub use config::{ExperimentConfig, FieldFunctionSpec, ObservableFlags, ProcessConfig};
pub use ensemble::{run_ensemble, EnsembleResult};
pub use stats::{estimate_current_covariance, estimate_tagged_covariance, EstimateReport};
pub use suites::{run_suite, CheckResult, Suite, SuiteReport};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::ensemble::run_ensemble_with;
use crate::harness::output::{write_ensemble, OutputFiles};
use crate::harness::stats::mean_with_se;
use crate::process::ProcessParams;

/// One comparison of the ring-doubling diagnostic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingCheck {
    pub statistic: String,
    pub time: f64,
    pub base: f64,
    pub base_se: f64,
    pub doubled: f64,
    pub doubled_se: f64,
    pub z: f64,
    pub pass: bool,
}

/// Outcome of rerunning the ensemble at twice the ring size: statistics
/// must agree within four combined standard errors, otherwise finite-size
/// contamination is flagged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingReport {
    pub base_ring: u32,
    pub doubled_ring: u32,
    pub checks: Vec<DoublingCheck>,
    pub passed: bool,
}

fn compare(statistic: &str, time: f64, a: (f64, f64), b: (f64, f64)) -> DoublingCheck {
    let denom = (a.1 * a.1 + b.1 * b.1).sqrt();
    let z = if denom > 0.0 { (a.0 - b.0) / denom } else { 0.0 };
    DoublingCheck {
        statistic: statistic.into(),
        time,
        base: a.0,
        base_se: a.1,
        doubled: b.0,
        doubled_se: b.1,
        z,
        pass: z.abs() <= 4.0,
    }
}

/// Run the ring-doubling diagnostic for a configuration.
pub fn ring_doubling_report(config: &ExperimentConfig) -> Result<DoublingReport> {
    let params = config.process.params()?;
    let doubled = ProcessParams::with_ring_size(
        params.n,
        params.alpha,
        params.beta,
        params.rho,
        params.horizon,
        params.ring_size * 2,
    )?;
    let base_out = run_ensemble_with(config, &params)?;
    let doubled_out = run_ensemble_with(config, &doubled)?;
    let sqrt_n = (params.n as f64).sqrt();
    let mut checks = Vec::new();
    for (k, &t) in config.sample_times.iter().enumerate() {
        let base: Vec<f64> = base_out
            .series
            .iter()
            .map(|s| s.centered_current[k] / sqrt_n)
            .collect();
        let two: Vec<f64> = doubled_out
            .series
            .iter()
            .map(|s| s.centered_current[k] / sqrt_n)
            .collect();
        checks.push(compare("current mean", t, mean_with_se(&base), mean_with_se(&two)));
        let var = |xs: &[f64]| {
            let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
            mean_with_se(&sq)
        };
        checks.push(compare("current second moment", t, var(&base), var(&two)));
    }
    let passed = checks.iter().all(|c| c.pass);
    Ok(DoublingReport {
        base_ring: params.ring_size,
        doubled_ring: doubled.ring_size,
        checks,
        passed,
    })
}

/// Everything one `simulate` invocation produces.
#[derive(Debug)]
pub struct ExperimentArtifacts {
    pub result: EnsembleResult,
    pub estimates: Vec<EstimateReport>,
    pub doubling: Option<DoublingReport>,
    pub files: OutputFiles,
}

/// Run an experiment end to end: ensemble, covariance estimates against
/// theory, optional ring-doubling diagnostic, persisted CSV/JSON output.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentArtifacts> {
    config.validate()?;
    let params = config.process.params()?;
    let result = run_ensemble(config)?;
    let mut estimates = Vec::new();
    if result.series.len() >= 3 {
        let nt = config.sample_times.len();
        for i in 0..nt {
            for j in 0..=i {
                if config.observables.current {
                    estimates.push(estimate_current_covariance(&result.series, i, j, &params)?);
                }
                if config.observables.tagged {
                    estimates.push(estimate_tagged_covariance(&result.series, i, j, &params)?);
                }
            }
        }
    }
    let doubling = if config.ring_doubling_check {
        Some(ring_doubling_report(config)?)
    } else {
        None
    };
    let files = write_ensemble(out_dir, config, &result, &estimates)?;
    if let Some(d) = &doubling {
        let path = out_dir.join("ring_doubling.json");
        std::fs::write(&path, serde_json::to_string_pretty(d)?)?;
    }
    Ok(ExperimentArtifacts { result, estimates, doubling, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_doubling_on_small_system_passes() {
        let cfg = ExperimentConfig::from_json(
            r#"{
            "process": {"n": 20, "alpha": 1.0, "beta": 2.0, "rho": 0.3, "horizon": 0.5},
            "replicas": 200,
            "master_seed": 11,
            "sample_times": [0.5],
            "observables": {"current": true, "tagged": false, "field": false}
        }"#,
        )
        .unwrap();
        let report = ring_doubling_report(&cfg).unwrap();
        assert_eq!(report.base_ring, 1024);
        assert_eq!(report.doubled_ring, 2048);
        assert!(report.passed, "{:#?}", report.checks);
    }

    #[test]
    fn experiment_end_to_end() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::from_json(
            r#"{
            "process": {"n": 20, "alpha": 1.0, "beta": 2.0, "rho": 0.3, "horizon": 0.5},
            "replicas": 12,
            "master_seed": 5,
            "sample_times": [0.25, 0.5],
            "observables": {"current": true, "tagged": true, "field": false}
        }"#,
        )
        .unwrap();
        let artifacts = run_experiment(&cfg, dir.path()).unwrap();
        assert_eq!(artifacts.result.series.len(), 12);
        // 3 time pairs x 2 observables
        assert_eq!(artifacts.estimates.len(), 6);
        assert!(artifacts.files.current.is_some());
        assert!(artifacts.files.summary.exists());
    }
}
