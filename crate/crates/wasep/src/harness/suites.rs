//! Executable verification suites.
//!
//! Each suite runs a set of named checks and reports every value, target,
//! tolerance and verdict. The same checks back the acceptance test target,
//! so `verify <suite>` at the command line and `cargo test` exercise one
//! code path.

use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::ensemble::run_ensemble;
use crate::harness::stats::{
    covariance_with_jackknife, estimate_current_covariance, estimate_tagged_covariance,
    mean_with_se,
};
use crate::process::{
    conservation_identity_check, tagged_current_identity_check, ProcessParams, SimState,
};
use crate::rates::{
    cost_dominates_rate, critical_grid_rate, finite_dim_rate, path_rate_sub, path_rate_super,
    GridPath,
};
use crate::rng::replica_rng;
use crate::theory::covmat::CovMatrix;
use crate::theory::grid::{gaussian_bump, smooth_ramp, GridFunction};
use crate::theory::semigroup::field_increment_cov;
use crate::theory::variance::{current_cov, f_drift, fbm_cov, Regime, VarianceSpec};
use crate::theory::volterra::kernel_cov;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Kernel,
    Covariance,
    Rates,
    Inequality,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Kernel,
        Suite::Covariance,
        Suite::Rates,
        Suite::Inequality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Kernel => "kernel",
            Suite::Covariance => "covariance",
            Suite::Rates => "rates",
            Suite::Inequality => "inequality",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "identities" => Ok(Suite::Identities),
            "kernel" => Ok(Suite::Kernel),
            "covariance" => Ok(Suite::Covariance),
            "rates" => Ok(Suite::Rates),
            "inequality" => Ok(Suite::Inequality),
            other => Err(Error::UnknownSuite(other.into())),
        }
    }
}

/// One named check with its measured value, target and tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    /// |value - target| <= tolerance.
    pub fn absolute(name: impl Into<String>, value: f64, target: f64, tol: f64) -> CheckResult {
        let err = (value - target).abs();
        CheckResult {
            name: name.into(),
            value,
            target,
            tolerance: tol,
            pass: err <= tol,
            detail: format!("|{value:.9e} - {target:.9e}| = {err:.3e}"),
        }
    }

    /// |value/target - 1| <= tol.
    pub fn relative(name: impl Into<String>, value: f64, target: f64, tol: f64) -> CheckResult {
        let err = ((value - target) / target).abs();
        CheckResult {
            name: name.into(),
            value,
            target,
            tolerance: tol,
            pass: err <= tol,
            detail: format!("relative error {err:.3e}"),
        }
    }

    /// z-score check |z| <= 4.
    pub fn z_score(name: impl Into<String>, estimate: f64, se: f64, target: f64) -> CheckResult {
        let z = if se > 0.0 { (estimate - target) / se } else if estimate == target { 0.0 } else { f64::INFINITY };
        CheckResult {
            name: name.into(),
            value: z,
            target: 0.0,
            tolerance: 4.0,
            pass: z.abs() <= 4.0,
            detail: format!("estimate {estimate:.6e}, target {target:.6e}, se {se:.3e}, z {z:+.2}"),
        }
    }

    /// exact boolean check.
    pub fn exact(name: impl Into<String>, passes: usize, total: usize) -> CheckResult {
        CheckResult {
            name: name.into(),
            value: passes as f64,
            target: total as f64,
            tolerance: 0.0,
            pass: passes == total,
            detail: format!("{passes}/{total} exact"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub quick: bool,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: Suite, quick: bool, checks: Vec<CheckResult>) -> SuiteReport {
        let passed = checks.iter().all(|c| c.pass);
        SuiteReport { suite: suite.name().into(), quick, checks, passed }
    }
}

/// Run one named suite. `quick` divides replica counts by ten for smoke
/// runs.
pub fn run_suite(suite: Suite, quick: bool) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Identities => identity_checks(quick)?,
        Suite::Kernel => {
            let mut v = kernel_checks()?;
            v.extend(f_drift_checks());
            v
        }
        Suite::Covariance => {
            let mut v = covariance_super_current_checks(quick)?;
            v.extend(covariance_tagged_checks(quick)?);
            v.extend(covariance_sub_checks(quick)?);
            v.extend(covariance_sub_trend_checks(quick)?);
            v.extend(field_convergence_checks());
            v.extend(sampler_checks(quick)?);
            v
        }
        Suite::Rates => rate_consistency_checks()?,
        Suite::Inequality => inequality_checks()?,
    };
    Ok(SuiteReport::new(suite, quick, checks))
}

fn scaled(replicas: u64, quick: bool) -> u64 {
    if quick {
        (replicas / 10).max(50)
    } else {
        replicas
    }
}

/// Exact lattice identities: conservation of the ramp-weighted density
/// increment against bond currents, and the ordering identity between the
/// origin current and the tagged particle; both checked with integer
/// arithmetic at ten sample times over each replica.
pub fn identity_checks(quick: bool) -> Result<Vec<CheckResult>> {
    let params = ProcessParams::new(50, 1.0, 2.0, 0.3, 0.5)?;
    let replicas = scaled(100, quick);
    let ramp_width = 2;
    let times: Vec<f64> = (1..=10).map(|k| k as f64 * 0.05).collect();
    let mut conservation_pass = 0usize;
    let mut tagged_pass = 0usize;
    let mut count_pass = 0usize;
    let total = replicas as usize * times.len();
    for replica in 0..replicas {
        let seed = crate::rng::replica_seed(0x1DE0_17E5, replica);
        let initial = SimState::new(&params, seed, true, true)?;
        let n0 = initial.particle_count();
        let mut state = initial.clone();
        for &t in &times {
            state.advance(&params, t)?;
            if conservation_identity_check(&state, &initial, &params, ramp_width)? {
                conservation_pass += 1;
            }
            if tagged_current_identity_check(&state, &params)? {
                tagged_pass += 1;
            }
            if state.particle_count() == n0 {
                count_pass += 1;
            }
        }
    }
    Ok(vec![
        CheckResult::exact("conservation identity (exact integer)", conservation_pass, total),
        CheckResult::exact("tagged/current ordering identity (exact integer)", tagged_pass, total),
        CheckResult::exact("particle count conserved", count_pass, total),
    ])
}

/// Kernel validation: the Volterra covariance integral against the closed
/// fractional-Brownian form on a 5x5 grid, and the variance identity.
pub fn kernel_checks() -> Result<Vec<CheckResult>> {
    let grid = [0.4, 0.8, 1.2, 1.6, 2.0];
    let mut worst = 0.0_f64;
    for &t in &grid {
        for &s in &grid {
            if s > t {
                continue;
            }
            let got = kernel_cov(t, s)?;
            worst = worst.max((got - fbm_cov(t, s)).abs());
        }
    }
    let mut checks = vec![CheckResult::absolute(
        "kernel covariance vs closed form (5x5 grid, max abs err)",
        worst,
        0.0,
        1e-6,
    )];
    for t in [0.5, 1.0, 2.0] {
        let got = kernel_cov(t, t)?;
        checks.push(CheckResult::absolute(
            format!("kernel variance at t={t}"),
            got,
            t.sqrt(),
            1e-6,
        ));
    }
    Ok(checks)
}

/// Closed-form drift profile against its Monte Carlo definition
/// (1e6 Gaussian samples per case, 4 standard errors).
pub fn f_drift_checks() -> Vec<CheckResult> {
    let mut rng = replica_rng(0xF0D1, 1);
    let mut checks = Vec::new();
    const SAMPLES: usize = 1_000_000;
    for m in [0.0_f64, 0.4, 1.0] {
        for t in [0.5_f64, 1.0, 2.0] {
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for _ in 0..SAMPLES {
                let z: f64 = rng.sample(StandardNormal);
                let plus = (t.sqrt() * z - m * t).max(0.0);
                sum += plus;
                sumsq += plus * plus;
            }
            let mean = sum / SAMPLES as f64;
            let var = (sumsq / SAMPLES as f64 - mean * mean).max(0.0);
            let se = (var / SAMPLES as f64).sqrt();
            let mc = 0.5 * m * t + mean;
            checks.push(CheckResult {
                name: format!("drift profile closed form vs MC (m={m}, t={t})"),
                value: f_drift(t, m),
                target: mc,
                tolerance: 4.0 * se,
                pass: (f_drift(t, m) - mc).abs() <= 4.0 * se,
                detail: format!("closed {:.7}, mc {mc:.7} +- {se:.1e}", f_drift(t, m)),
            });
        }
    }
    checks
}

fn covariance_experiment(tagged: bool, quick: bool) -> Result<ExperimentConfig> {
    ExperimentConfig::from_json(&format!(
        r#"{{
        "process": {{"n": 200, "alpha": 1.0, "beta": 2.0, "rho": 0.3,
                     "ring_size": 1600, "horizon": 1.0}},
        "replicas": {},
        "master_seed": 20260810,
        "sample_times": [0.25, 0.5, 1.0],
        "observables": {{"current": true, "tagged": {tagged}, "field": false}}
    }}"#,
        scaled(2000, quick)
    ))
}

/// Super-regime current covariance: all six entries of the empirical
/// covariance of the scaled centred current against the limiting
/// covariance, within four jackknife standard errors.
pub fn covariance_super_current_checks(quick: bool) -> Result<Vec<CheckResult>> {
    let cfg = covariance_experiment(false, quick)?;
    let params = cfg.process.params()?;
    let out = run_ensemble(&cfg)?;
    let mut checks = Vec::new();
    let nt = cfg.sample_times.len();
    for i in 0..nt {
        for j in 0..=i {
            let rep = estimate_current_covariance(&out.series, i, j, &params)?;
            checks.push(CheckResult::z_score(
                format!("current {}", rep.name),
                rep.estimate,
                rep.std_error,
                rep.theory.unwrap(),
            ));
        }
    }
    // stationarity by-product: the centred current has mean zero
    let sqrt_n = (params.n as f64).sqrt();
    let last: Vec<f64> = out
        .series
        .iter()
        .map(|s| s.centered_current[nt - 1] / sqrt_n)
        .collect();
    let (mean, se) = mean_with_se(&last);
    checks.push(CheckResult::z_score("current mean at T", mean, se, 0.0));
    Ok(checks)
}

/// Tagged-particle covariance, against `a(t,s) / rho^2`, from the
/// origin-conditioned initial measure.
pub fn covariance_tagged_checks(quick: bool) -> Result<Vec<CheckResult>> {
    let cfg = covariance_experiment(true, quick)?;
    let params = cfg.process.params()?;
    let out = run_ensemble(&cfg)?;
    let mut checks = Vec::new();
    for i in 0..cfg.sample_times.len() {
        for j in 0..=i {
            let rep = estimate_tagged_covariance(&out.series, i, j, &params)?;
            checks.push(CheckResult::z_score(
                format!("tagged {}", rep.name),
                rep.estimate,
                rep.std_error,
                rep.theory.unwrap(),
            ));
        }
    }
    Ok(checks)
}

fn sub_variance_reports(n: u32, replicas: u64, quick: bool) -> Result<Vec<crate::harness::stats::EstimateReport>> {
    let cfg = ExperimentConfig::from_json(&format!(
        r#"{{
        "process": {{"n": {n}, "alpha": 1.0, "beta": 0.5, "rho": 0.3, "horizon": 1.0}},
        "replicas": {},
        "master_seed": 31337,
        "sample_times": [0.5, 1.0],
        "observables": {{"current": true, "tagged": false, "field": false}}
    }}"#,
        scaled(replicas, quick)
    ))?;
    let params = cfg.process.params()?;
    let out = run_ensemble(&cfg)?;
    (0..cfg.sample_times.len())
        .map(|i| estimate_current_covariance(&out.series, i, i, &params))
        .collect()
}

/// Sub-regime variance of the centred current against the Brownian-scale
/// prediction, at the pinned scale parameter n = 100.
///
/// Known red at t = 0.5: the finite-n correction at n = 100 is about +25%
/// of the limit value, outside any 4-SE band with a meaningful replica
/// count. The effect is physics, not implementation: the engine matches an
/// independent bond-driven simulator (`tests/oracle.rs`), the current mean
/// obeys its exact lattice identity, the excess is ring-size independent,
/// and [`covariance_sub_trend_checks`] shows the limit being reached by
/// n = 400.
pub fn covariance_sub_checks(quick: bool) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    for rep in sub_variance_reports(100, 2000, quick)? {
        checks.push(CheckResult::z_score(
            format!("sub-regime {}", rep.name),
            rep.estimate,
            rep.std_error,
            rep.theory.unwrap(),
        ));
    }
    Ok(checks)
}

/// Scale-parameter doubling trend for the sub-regime variance: the excess
/// over the limit shrinks as n grows and is statistically gone by n = 400.
pub fn covariance_sub_trend_checks(quick: bool) -> Result<Vec<CheckResult>> {
    let mut trend = String::new();
    let mut final_z = f64::NAN;
    let mut decreasing = true;
    let mut prev_excess = f64::INFINITY;
    for n in [100u32, 200, 400] {
        let reps = if n == 400 { 800 } else { 2000 };
        let rep = &sub_variance_reports(n, reps, quick)?[0]; // t = 0.5
        let theory = rep.theory.unwrap();
        let excess = rep.estimate / theory - 1.0;
        trend.push_str(&format!(" n={n}: {excess:+.1}%", excess = excess * 100.0));
        if excess > prev_excess + 0.05 {
            decreasing = false;
        }
        prev_excess = excess;
        if n == 400 {
            final_z = rep.z_score.unwrap_or(f64::INFINITY);
        }
    }
    Ok(vec![CheckResult {
        name: "sub-regime variance approaches the limit under n-doubling".into(),
        value: final_z,
        target: 0.0,
        tolerance: 4.0,
        pass: decreasing && final_z.abs() <= 4.0,
        detail: format!("excess at t=0.5 over n:{trend}; z at n=400 is {final_z:+.2}"),
    }])
}

/// Convergence of the smoothed-ramp field increment covariance to the
/// limiting current covariance, relative error at most 2% at l = 64 in
/// both the super and sub regimes.
pub fn field_convergence_checks() -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for regime in [Regime::Super, Regime::Sub] {
        let spec = VarianceSpec::new(regime, 1.0, 0.3);
        for (t, s) in [(1.0, 1.0), (1.0, 0.5)] {
            let target = current_cov(t, s, &spec);
            let mut value_at_64 = f64::NAN;
            let mut trend = String::new();
            for l in [4u32, 8, 16, 32, 64] {
                let g = smooth_ramp(l);
                let got = field_increment_cov(&g, t, s, &spec);
                let rel = ((got - target) / target).abs();
                trend.push_str(&format!(" l={l}: {rel:.2e}"));
                if l == 64 {
                    value_at_64 = got;
                }
            }
            let mut check = CheckResult::relative(
                format!("field increment cov -> a({t},{s}) at l=64 ({regime:?})"),
                value_at_64,
                target,
                0.02,
            );
            check.detail = format!("relative errors:{trend}");
            checks.push(check);
        }
    }
    checks
}

/// Gaussian sampler against the covariance matrix it was built from.
pub fn sampler_checks(quick: bool) -> Result<Vec<CheckResult>> {
    let spec = VarianceSpec::new(Regime::Super, 1.0, 0.3);
    let a = CovMatrix::from_times(&[0.5, 1.0], &spec)?;
    let n = if quick { 10_000 } else { 100_000 };
    let mut rng = replica_rng(0x5A3B, 0);
    let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let p = a.sample_path_with(&mut rng)?;
        xs.push(p.values()[0]);
        ys.push(p.values()[1]);
    }
    let mut checks = Vec::new();
    for (name, u, v, target) in [
        ("sampler var(0.5)", &xs, &xs, a.entry(0, 0)),
        ("sampler var(1.0)", &ys, &ys, a.entry(1, 1)),
        ("sampler cov(0.5, 1.0)", &xs, &ys, a.entry(0, 1)),
    ] {
        let (cov, se) = covariance_with_jackknife(u, v)?;
        checks.push(CheckResult::z_score(name, cov, se, target));
    }
    Ok(checks)
}

/// Rate-function consistency:
/// (a) sub-regime dyadic quadratic forms increase to the path rate;
/// (b) super-regime reconstruction matches its quadratic form;
/// (c) critical at zero asymmetry coincides with super.
pub fn rate_consistency_checks() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    // (a) smooth path, sub covariance, dyadic grids m = 2..256
    let sub = VarianceSpec::new(Regime::Sub, 1.0, 0.3);
    let fine: Vec<f64> = (1..=1024).map(|i| i as f64 / 1024.0).collect();
    let path = GridPath::new(
        fine.clone(),
        fine.iter()
            .map(|t| 0.3 * (std::f64::consts::PI * t).sin() + 0.2 * t)
            .collect(),
    )?;
    let target = path_rate_sub(&path, &sub)?;
    let mut values = Vec::new();
    let mut monotone = true;
    for k in 1..=8 {
        let m = 1usize << k;
        let grid: Vec<f64> = (1..=m).map(|i| i as f64 / m as f64).collect();
        let a = CovMatrix::from_times(&grid, &sub)?;
        let hv: Vec<f64> = grid.iter().map(|&t| path.eval(t)).collect();
        let v = finite_dim_rate(&hv, &a)?;
        if let Some(&prev) = values.last() {
            if v < prev - 1e-10 {
                monotone = false;
            }
        }
        values.push(v);
    }
    let rendered: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    checks.push(CheckResult {
        name: "sub dyadic quadratic forms are monotone".into(),
        value: monotone as u8 as f64,
        target: 1.0,
        tolerance: 0.0,
        pass: monotone,
        detail: format!("values m=2..256: [{}]", rendered.join(", ")),
    });
    checks.push(CheckResult::relative(
        "sub dyadic m=256 vs path rate",
        *values.last().unwrap(),
        target,
        0.01,
    ));

    // (b) super regime: unit derivative reconstruction at m = 256
    let sup = VarianceSpec::new(Regime::Super, 1.0, 0.3);
    let hdot = GridPath::midpoint_grid(1.0, vec![1.0; 256])?;
    let (path_rate, reconstructed) = path_rate_super(&hdot, &sup)?;
    let a = CovMatrix::from_times(reconstructed.times(), &sup)?;
    let grid_rate = finite_dim_rate(reconstructed.values(), &a)?;
    checks.push(CheckResult::relative(
        "super grid quadratic form vs path rate (unit derivative)",
        grid_rate,
        path_rate,
        0.02,
    ));

    // (c) critical with alpha = 0 against super, to 1e-10
    let crit0 = VarianceSpec::new(Regime::Critical, 0.0, 0.3);
    let sup0 = VarianceSpec::new(Regime::Super, 0.0, 0.3);
    let h = GridPath::new(vec![0.25, 0.5, 1.0], vec![0.1, 0.35, 0.5])?;
    let grids = vec![vec![0.25, 0.5, 1.0]];
    let (vals, _, _) = critical_grid_rate(&h, &grids, &crit0)?;
    let a0 = CovMatrix::from_times(&grids[0], &sup0)?;
    let hv: Vec<f64> = grids[0].iter().map(|&t| h.eval(t)).collect();
    let want = finite_dim_rate(&hv, &a0)?;
    checks.push(CheckResult::absolute(
        "critical (alpha = 0) vs super quadratic form",
        vals[0],
        want,
        1e-10 * want.max(1.0),
    ));
    Ok(checks)
}

/// Randomised initial profiles satisfy the cost-dominates-rate inequality;
/// the plateau profile on the transport window nearly saturates it.
pub fn inequality_checks() -> Result<Vec<CheckResult>> {
    let spec = VarianceSpec::new(Regime::Sub, 1.0, 0.3);
    let times = [0.5, 1.0];
    let mut rng = replica_rng(0x1E65, 2);
    let mut passes = 0usize;
    let mut worst_violation = 0.0_f64;
    const CASES: usize = 100;
    for _ in 0..CASES {
        let center = rng.gen_range(-1.5..0.5);
        let width = rng.gen_range(0.02..0.4);
        let amp = rng.gen_range(-2.0..2.0);
        let phi = gaussian_bump(center, width, amp)?;
        let check = cost_dominates_rate(&phi, &times, &spec)?;
        if check.holds {
            passes += 1;
        } else {
            worst_violation = worst_violation.max(check.rate - check.cost);
        }
    }
    let mut checks = vec![CheckResult {
        name: "cost dominates rate on 100 random profiles".into(),
        value: passes as f64,
        target: CASES as f64,
        tolerance: 0.0,
        pass: passes == CASES,
        detail: format!("{passes}/{CASES}, worst violation {worst_violation:.2e}"),
    }];

    // saturating plateau on the transport window
    let t = 1.0;
    let window = spec.velocity() * t;
    let edge = 0.01;
    let phi = GridFunction::from_fn(-window - 5.0 * edge, 5.0 * edge, 1.0 / 512.0, |u| {
        let rise = |x: f64| 0.5 * (1.0 + libm::erf(x / (edge * std::f64::consts::SQRT_2)));
        rise(u + window) * rise(-u)
    })?;
    let check = cost_dominates_rate(&phi, &[t], &spec)?;
    let gap = (check.cost - check.rate) / check.cost;
    checks.push(CheckResult {
        name: "saturating profile near-equality".into(),
        value: gap,
        target: 0.0,
        tolerance: 0.05,
        pass: check.holds && gap <= 0.05,
        detail: format!("cost {:.6}, rate {:.6}, gap {gap:.4}", check.cost, check.rate),
    });
    Ok(checks)
}
