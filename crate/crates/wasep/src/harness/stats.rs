//! Ensemble statistics with jackknife standard errors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{ObservableSeries, ProcessParams};
use crate::theory::variance::{current_cov, VarianceSpec};

/// One estimated quantity with its uncertainty and, when available, the
/// theoretical target and the z-score of the discrepancy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub replicas: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
}

impl EstimateReport {
    pub fn with_theory(name: String, estimate: f64, std_error: f64, replicas: usize, theory: f64) -> Self {
        let z_score = (std_error > 0.0).then(|| (estimate - theory) / std_error);
        EstimateReport { name, estimate, std_error, replicas, theory: Some(theory), z_score }
    }

    /// |z| <= 4 (or an exact match when the estimator has no spread).
    pub fn within_four_se(&self) -> bool {
        match self.z_score {
            Some(z) => z.abs() <= 4.0,
            None => match self.theory {
                Some(t) => self.estimate == t,
                None => true,
            },
        }
    }
}

/// Sample covariance of paired observations with a leave-one-out jackknife
/// standard error.
pub fn covariance_with_jackknife(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let r = xs.len();
    if ys.len() != r {
        return Err(Error::InvalidParams("paired samples differ in length".into()));
    }
    if r < 3 {
        return Err(Error::InvalidParams(
            "need at least three replicas for a jackknife covariance".into(),
        ));
    }
    let rf = r as f64;
    let (mut sx, mut sy, mut sxy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sx += x;
        sy += y;
        sxy += x * y;
    }
    let cov = (sxy - sx * sy / rf) / (rf - 1.0);

    // O(R) leave-one-out pass
    let mut loo = Vec::with_capacity(r);
    for (&x, &y) in xs.iter().zip(ys) {
        let sx1 = sx - x;
        let sy1 = sy - y;
        let sxy1 = sxy - x * y;
        let r1 = rf - 1.0;
        loo.push((sxy1 - sx1 * sy1 / r1) / (r1 - 1.0));
    }
    let loo_mean: f64 = loo.iter().sum::<f64>() / rf;
    let ss: f64 = loo.iter().map(|v| (v - loo_mean).powi(2)).sum();
    let se = ((rf - 1.0) / rf * ss).sqrt();
    Ok((cov, se))
}

/// Sample mean with its standard error.
pub fn mean_with_se(xs: &[f64]) -> (f64, f64) {
    let r = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / r;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Covariance estimate of the scaled centred current between two sample
/// times, with the limiting covariance attached.
pub fn estimate_current_covariance(
    series: &[ObservableSeries],
    i: usize,
    j: usize,
    params: &ProcessParams,
) -> Result<EstimateReport> {
    let spec = params.variance_spec();
    estimate_covariance_inner(series, i, j, params, &spec, false)
}

/// As [`estimate_current_covariance`] for the tagged particle, against
/// `a(t,s) / rho^2`.
pub fn estimate_tagged_covariance(
    series: &[ObservableSeries],
    i: usize,
    j: usize,
    params: &ProcessParams,
) -> Result<EstimateReport> {
    let spec = params.variance_spec();
    estimate_covariance_inner(series, i, j, params, &spec, true)
}

fn estimate_covariance_inner(
    series: &[ObservableSeries],
    i: usize,
    j: usize,
    params: &ProcessParams,
    spec: &VarianceSpec,
    tagged: bool,
) -> Result<EstimateReport> {
    if series.is_empty() {
        return Err(Error::InvalidParams("no series supplied".into()));
    }
    let times = &series[0].sample_times;
    if i >= times.len() || j >= times.len() {
        return Err(Error::InvalidParams("sample-time index out of range".into()));
    }
    let sqrt_n = (params.n as f64).sqrt();
    let pick = |s: &ObservableSeries, k: usize| -> Result<f64> {
        if tagged {
            let ct = s
                .centered_tagged
                .as_ref()
                .ok_or(Error::TaggedDisabled)?;
            Ok(ct[k] / sqrt_n)
        } else {
            Ok(s.centered_current[k] / sqrt_n)
        }
    };
    let xs: Vec<f64> = series.iter().map(|s| pick(s, i)).collect::<Result<_>>()?;
    let ys: Vec<f64> = series.iter().map(|s| pick(s, j)).collect::<Result<_>>()?;
    let (cov, se) = covariance_with_jackknife(&xs, &ys)?;
    let mut theory = current_cov(times[i], times[j], spec);
    let label = if tagged {
        theory /= params.rho * params.rho;
        format!("tagged_cov({}, {})", times[i], times[j])
    } else {
        format!("current_cov({}, {})", times[i], times[j])
    };
    Ok(EstimateReport::with_theory(label, cov, se, series.len(), theory))
}
