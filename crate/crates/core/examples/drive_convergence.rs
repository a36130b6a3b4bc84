//! Fock-cutoff convergence of g2(0) as the drive grows.

use eitsim::sweeps::convergence_check;
use eitsim::ModelParams;

fn main() -> eitsim::Result<()> {
    for eps_p in [0.01, 0.1, 0.3, 1.0] {
        let c = convergence_check(&ModelParams { eps_p, n_max: 3, ..ModelParams::fig2() })?;
        println!(
            "eps_p = {eps_p:<4}  g2: {:.5e} -> {:.5e}  (rel {:.1e}){}",
            c.g2_low,
            c.g2_high,
            c.g2_rel_delta,
            if c.flagged { "  flagged" } else { "" }
        );
    }
    Ok(())
}
