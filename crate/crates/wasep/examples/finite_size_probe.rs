//! Finite-size diagnostics for the sub-regime current variance.

use rayon::prelude::*;
use wasep::process::{ProcessParams, SimState};
use wasep::rng::replica_seed;

fn run(n: u32, reps: u64, t_samples: &[f64]) -> Vec<(f64, f64, f64, f64, f64)> {
    let p = ProcessParams::new(n, 1.0, 0.5, 0.3, 1.0).unwrap();
    let rows: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut s = SimState::new(&p, replica_seed(777, r), false, false).unwrap();
            let mut out = Vec::new();
            for &t in t_samples {
                s.advance(&p, t).unwrap();
                out.push(s.centered_current(&p));
            }
            out
        })
        .collect();
    t_samples
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let xs: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            let rf = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / rf;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (rf - 1.0);
            let mean_se = (var / rf).sqrt();
            let var_n = var / n as f64;
            let var_se = var * (2.0 / rf).sqrt() / n as f64;
            (t, mean, mean_se, var_n, var_se)
        })
        .collect()
}

fn main() {
    for n in [100u32, 200, 400] {
        let reps = if n == 400 { 1000 } else { 2000 };
        for (t, mean, mean_se, var_n, var_se) in run(n, reps, &[0.5, 1.0]) {
            let target = 0.084 * t;
            println!(
                "n={n:3} t={t}: mean J-bar = {mean:+.4} +- {mean_se:.4} (exact 0), Var/n = {var_n:.5} +- {var_se:.5}, target {target:.5}, excess {:+.1}%",
                (var_n / target - 1.0) * 100.0
            );
        }
    }
}
