//! g2(0) of the two-atom system against the probe detuning δ.
//!
//! Pass a step count to change the grid: `cargo run --example detuning_sweep -- 25`.

use eitsim::sweeps::{linspace, sweep_delta};
use eitsim::ModelParams;

fn main() -> eitsim::Result<()> {
    let steps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(9);
    let p = ModelParams::fig3(0.0);
    let result = sweep_delta(&p, &linspace(-1.2 * p.g13, 1.2 * p.g13, steps))?;
    println!("{:>8} {:>12} {:>12} {:>12} {:>10}", "delta", "g2(0)", "<n>", "P", "A");
    for r in &result.records {
        match &r.error {
            Some(e) => println!("{:>8.3} failed: {e}", r.delta),
            None => println!(
                "{:>8.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.4}",
                r.delta, r.g2_zero, r.mean_photon, r.p, r.anharmonicity
            ),
        }
    }
    Ok(())
}
