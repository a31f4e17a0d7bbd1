//! Event-loop throughput probe at the covariance-suite scale.
//!
//! ```sh
//! cargo run --release -p wasep --example bench_sim
//! ```

use std::time::Instant;

use wasep::process::{ProcessParams, SimState};

fn main() {
    let params = ProcessParams::with_ring_size(200, 1.0, 2.0, 0.3, 1.0, 1600).unwrap();
    let particles = (params.rho * params.ring_size as f64).round();
    let rate = particles * (params.right_rate() + params.left_rate());

    let start = Instant::now();
    let mut state = SimState::new(&params, 42, false, false).unwrap();
    state.advance(&params, params.horizon).unwrap();
    let elapsed = start.elapsed();

    let events = rate * params.horizon;
    println!(
        "one replica: {elapsed:?} for ~{events:.2e} attempts -> {:.1} ns/attempt",
        elapsed.as_secs_f64() / events * 1e9
    );
    println!("origin current at T: {}", state.origin_current());
}
