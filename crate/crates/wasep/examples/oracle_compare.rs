//! Cross-validation of the production engine against an independent
//! bond-driven simulator with exponential clocks (no shared code paths).

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use wasep::process::{ProcessParams, SimState};
use wasep::rng::replica_seed;

/// Bond-driven Gillespie: every bond attempts right swaps at rate p and
/// left swaps at rate q; the total rate L (p + q) is constant.
fn oracle_current(n: u32, l: usize, t_end: f64, seed: u64) -> i64 {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let gamma = (1.0 + 0.5_f64).min(2.0);
    let nf = n as f64;
    let p = nf.powf(gamma) * (0.5 + 1.0 * nf.powf(-0.5));
    let q = nf.powf(gamma) * 0.5;
    let rho = 0.3;
    let mut eta: Vec<u8> = (0..l).map(|_| (rng.gen::<f64>() < rho) as u8).collect();
    let total = l as f64 * (p + q);
    let origin = l / 2 - 1; // bond (origin-1, origin)
    let mut time = 0.0;
    let mut current = 0i64;
    loop {
        time += -rng.gen::<f64>().ln() / total;
        if time > t_end {
            break;
        }
        let bond = rng.gen_range(0..l);
        let right = rng.gen::<f64>() < p / (p + q);
        let a = bond;
        let b = (bond + 1) % l;
        if right {
            if eta[a] == 1 && eta[b] == 0 {
                eta[a] = 0;
                eta[b] = 1;
                if bond == origin {
                    current += 1;
                }
            }
        } else if eta[b] == 1 && eta[a] == 0 {
            eta[b] = 0;
            eta[a] = 1;
            if bond == origin {
                current -= 1;
            }
        }
    }
    current
}

fn stats(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt(), var, var * (2.0 / n).sqrt())
}

fn main() {
    let n = 100u32;
    let t = 0.5;
    let reps = 4000u64;
    let params = ProcessParams::new(n, 1.0, 0.5, 0.3, 1.0).unwrap();
    let l = params.ring_size as usize;
    let centering = params.current_centering(t);

    let engine: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut s = SimState::new(&params, replica_seed(555, r), false, false).unwrap();
            s.advance(&params, t).unwrap();
            s.centered_current(&params)
        })
        .collect();
    let oracle: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| oracle_current(n, l, t, replica_seed(999, r)) as f64 - centering)
        .collect();

    let (me, se_me, ve, se_ve) = stats(&engine);
    let (mo, se_mo, vo, se_vo) = stats(&oracle);
    println!("engine: mean {me:+.4} +- {se_me:.4}, Var/n {:.5} +- {:.5}", ve / n as f64, se_ve / n as f64);
    println!("oracle: mean {mo:+.4} +- {se_mo:.4}, Var/n {:.5} +- {:.5}", vo / n as f64, se_vo / n as f64);
    let z_mean = (me - mo) / (se_me * se_me + se_mo * se_mo).sqrt();
    let z_var = (ve - vo) / (se_ve * se_ve + se_vo * se_vo).sqrt();
    println!("z(mean) = {z_mean:+.2}, z(var) = {z_var:+.2}");
    println!("asymptotic target Var/n = {:.5}", 0.084 * t);
}
