//! Experiment configuration, read from JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::ProcessParams;
use crate::theory::grid::{self, GridFunction};

/// Default exponent of the rescaled-field normalisation `a_n = n^p`.
pub const DEFAULT_AN_EXPONENT: f64 = 0.75;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessConfig {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    /// even ring size; omitted means the safety default
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_size: Option<u32>,
    pub horizon: f64,
}

impl ProcessConfig {
    pub fn params(&self) -> Result<ProcessParams> {
        match self.ring_size {
            Some(l) => ProcessParams::with_ring_size(
                self.n, self.alpha, self.beta, self.rho, self.horizon, l,
            ),
            None => ProcessParams::new(self.n, self.alpha, self.beta, self.rho, self.horizon),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ObservableFlags {
    #[serde(default)]
    pub current: bool,
    #[serde(default)]
    pub tagged: bool,
    #[serde(default)]
    pub field: bool,
}

/// Spatial test function selector for field observables.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldFunctionSpec {
    Ramp { l: u32 },
    SmoothRamp { l: u32 },
    GaussianBump { center: f64, width: f64, amplitude: f64 },
}

impl FieldFunctionSpec {
    pub fn build(&self) -> Result<GridFunction> {
        match *self {
            FieldFunctionSpec::Ramp { l } => {
                if l == 0 {
                    return Err(Error::Config("ramp width must be positive".into()));
                }
                Ok(grid::ramp(l))
            }
            FieldFunctionSpec::SmoothRamp { l } => {
                if l == 0 {
                    return Err(Error::Config("ramp width must be positive".into()));
                }
                Ok(grid::smooth_ramp(l))
            }
            FieldFunctionSpec::GaussianBump { center, width, amplitude } => {
                grid::gaussian_bump(center, width, amplitude)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub process: ProcessConfig,
    pub replicas: u64,
    pub master_seed: u64,
    pub sample_times: Vec<f64>,
    pub observables: ObservableFlags,
    #[serde(default)]
    pub field_test_functions: Vec<FieldFunctionSpec>,
    /// exponent p of `a_n = n^p`, in (0.5, 1)
    #[serde(default = "default_an_exponent")]
    pub a_n_exponent: f64,
    #[serde(default)]
    pub ring_doubling_check: bool,
    #[serde(default = "default_output_path")]
    pub output_path: String,
}

fn default_an_exponent() -> f64 {
    DEFAULT_AN_EXPONENT
}

fn default_output_path() -> String {
    "out".into()
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig =
            serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let params = self.process.params()?;
        if self.replicas < 1 {
            return Err(Error::Config("need at least one replica".into()));
        }
        if self.sample_times.is_empty() {
            return Err(Error::Config("need at least one sample time".into()));
        }
        if self.sample_times[0] <= 0.0
            || self.sample_times.windows(2).any(|w| w[0] >= w[1])
            || *self.sample_times.last().unwrap() > params.horizon
        {
            return Err(Error::Config(
                "sample times must be strictly increasing in (0, T]".into(),
            ));
        }
        if !(self.a_n_exponent > 0.5 && self.a_n_exponent < 1.0) {
            return Err(Error::Config(format!(
                "a_n exponent {} outside (0.5, 1)",
                self.a_n_exponent
            )));
        }
        if self.observables.field && self.field_test_functions.is_empty() {
            return Err(Error::Config(
                "field observable enabled but no test functions given".into(),
            ));
        }
        for f in &self.field_test_functions {
            let g = f.build()?;
            let (lo, hi) = g.support();
            let win = params.field_window();
            if lo <= -win || hi >= win {
                return Err(Error::Config(format!(
                    "test function support [{lo}, {hi}] exceeds the ring window +-{win}"
                )));
            }
        }
        Ok(())
    }

    /// Rescaled-field normalisation `a_n = n^p`.
    pub fn a_n(&self) -> f64 {
        (self.process.n as f64).powf(self.a_n_exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> String {
        r#"{
            "process": {"n": 50, "alpha": 1.0, "beta": 2.0, "rho": 0.3, "horizon": 0.5},
            "replicas": 10,
            "master_seed": 7,
            "sample_times": [0.1, 0.25, 0.5],
            "observables": {"current": true, "tagged": false, "field": true},
            "field_test_functions": [{"kind": "ramp", "l": 1}]
        }"#
        .to_string()
    }

    #[test]
    fn parses_and_defaults() {
        let cfg = ExperimentConfig::from_json(&base_json()).unwrap();
        assert_eq!(cfg.a_n_exponent, 0.75);
        assert_eq!(cfg.output_path, "out");
        assert!(!cfg.ring_doubling_check);
        let p = cfg.process.params().unwrap();
        assert_eq!(p.ring_size, 1024);
    }

    #[test]
    fn rejects_bad_sample_times() {
        let bad = base_json().replace("[0.1, 0.25, 0.5]", "[0.0, 0.25]");
        assert!(ExperimentConfig::from_json(&bad).is_err());
        let bad = base_json().replace("[0.1, 0.25, 0.5]", "[0.25, 0.1]");
        assert!(ExperimentConfig::from_json(&bad).is_err());
        let bad = base_json().replace("[0.1, 0.25, 0.5]", "[0.25, 0.9]");
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn rejects_bad_exponent() {
        let cfg = base_json().replace("\"master_seed\": 7", "\"master_seed\": 7, \"a_n_exponent\": 0.4");
        assert!(ExperimentConfig::from_json(&cfg).is_err());
        let cfg = base_json().replace("\"master_seed\": 7", "\"master_seed\": 7, \"a_n_exponent\": 1.0");
        assert!(ExperimentConfig::from_json(&cfg).is_err());
    }

    #[test]
    fn rejects_field_without_functions() {
        let bad = base_json().replace(
            r#""field_test_functions": [{"kind": "ramp", "l": 1}]"#,
            r#""field_test_functions": []"#,
        );
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn rejects_oversized_support() {
        // window = 1024 / (2*50) = 10.24; a ramp of width 11 does not fit
        let bad = base_json().replace(r#"{"kind": "ramp", "l": 1}"#, r#"{"kind": "ramp", "l": 11}"#);
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn config_roundtrips_through_json() {
        let cfg = ExperimentConfig::from_json(&base_json()).unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        let back = ExperimentConfig::from_json(&s).unwrap();
        assert_eq!(back.replicas, cfg.replicas);
        assert_eq!(back.sample_times, cfg.sample_times);
    }
}
