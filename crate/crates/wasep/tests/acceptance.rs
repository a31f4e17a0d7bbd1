//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line (visible under `--nocapture`).

use std::time::Instant;

use wasep::harness::suites::{
    covariance_sub_checks, covariance_sub_trend_checks, covariance_super_current_checks,
    covariance_tagged_checks, f_drift_checks, field_convergence_checks, identity_checks,
    inequality_checks, kernel_checks, rate_consistency_checks, sampler_checks,
};
use wasep::harness::CheckResult;

fn report(criterion: &str, checks: &[CheckResult]) {
    let pass = checks.iter().all(|c| c.pass);
    println!("acceptance {criterion}: {}", if pass { "PASS" } else { "FAIL" });
    for c in checks {
        println!("  [{}] {} — {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    assert!(pass, "criterion failed: {criterion}");
}

// Exact lattice identities over 100 replicas at ten sample times each,
// in under a minute.
#[test]
fn criterion_01_exact_lattice_identities() {
    let start = Instant::now();
    let checks = identity_checks(false).unwrap();
    let elapsed = start.elapsed();
    report("01 exact lattice identities", &checks);
    println!("  runtime: {elapsed:.2?}");
    assert!(elapsed.as_secs() < 60, "identities took {elapsed:?}");
}

// Super-regime current covariance at n = 200, L = 1600, 2000 replicas:
// all six entries within four jackknife standard errors of a(t, s).
#[test]
fn criterion_02_super_regime_current_covariance() {
    let checks = covariance_super_current_checks(false).unwrap();
    report("02 super-regime current covariance", &checks);
}

// Tagged-particle covariance a(t,s)/rho^2 under the origin-conditioned
// initial measure, same setup.
#[test]
fn criterion_03_tagged_covariance() {
    let checks = covariance_tagged_checks(false).unwrap();
    report("03 tagged-particle covariance", &checks);
}

// Sub-regime variance of the centred current: chi alpha |1-2rho| t at the
// pinned scale parameter n = 100.
//
// This criterion is implemented exactly as stated and is expected RED at
// t = 0.5: the finite-n correction at n = 100 is about +25% of the limit,
// far outside the 4-SE band at 2000 replicas. The companion trend check
// below verifies the limit itself (the excess vanishes by n = 400), and
// `tests/oracle.rs` pins the engine against an independent bond-driven
// simulator, so the discrepancy is a property of the chosen parameters,
// not of the implementation.
#[test]
fn criterion_04_sub_regime_variance() {
    let trend = covariance_sub_trend_checks(false).unwrap();
    let pass = trend.iter().all(|c| c.pass);
    println!(
        "acceptance 04 companion n-doubling trend: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    for c in &trend {
        println!("  [{}] {} — {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    assert!(pass, "n-doubling trend failed");
    let checks = covariance_sub_checks(false).unwrap();
    report("04 sub-regime current variance (pinned n = 100)", &checks);
}

// Kernel validation: covariance integrals against the closed form within
// 1e-6, variance identity within 1e-6.
#[test]
fn criterion_05_kernel_validation() {
    let start = Instant::now();
    let checks = kernel_checks().unwrap();
    report("05 kernel validation", &checks);
    println!("  runtime: {:.2?}", start.elapsed());
}

// Closed-form drift profile against the Monte Carlo definition at 1e6
// samples, within four standard errors for all nine (m, t) pairs.
#[test]
fn criterion_06_drift_profile_closed_form() {
    let checks = f_drift_checks();
    assert_eq!(checks.len(), 9);
    report("06 drift profile vs Monte Carlo", &checks);
}

// Field increment covariance converges to a(t,s): relative error at most
// 2% at l = 64 in super and sub regimes.
#[test]
fn criterion_07_field_covariance_convergence() {
    let checks = field_convergence_checks();
    report("07 field increment covariance convergence", &checks);
}

// Rate-function consistency: dyadic monotone convergence to the sub path
// rate (1% at m = 256), super reconstruction quadratic form (2%), critical
// regime at zero asymmetry equals super to 1e-10.
#[test]
fn criterion_08_rate_function_consistency() {
    let checks = rate_consistency_checks().unwrap();
    report("08 rate-function consistency", &checks);
}

// Cost-dominates-rate inequality on 100 random profiles with near-equality
// on the saturating plateau.
#[test]
fn criterion_09_cost_dominates_rate() {
    let checks = inequality_checks().unwrap();
    report("09 cost dominates rate", &checks);
}

// Gaussian sampler: 1e5 paths reproduce the covariance matrix within four
// standard errors.
#[test]
fn criterion_10_gaussian_sampler() {
    let checks = sampler_checks(false).unwrap();
    report("10 gaussian sampler", &checks);
}
