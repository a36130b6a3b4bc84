//! Single-atom antibunching: steady-state g²(0) and the rise of g²(τ).

use eitsim::dynamics::{build_liouvillian, g2_tau_from, g2_zero, mean_photon, steady_state};
use eitsim::ModelParams;

fn main() -> eitsim::Result<()> {
    let p = ModelParams::fig2();
    let space = p.space()?;
    let l = build_liouvillian(&p, &space)?;
    let rho = steady_state(&l)?;
    println!("dim {} (Liouvillian {})", space.dim(), l.dim());
    println!("<a+a>   = {:.6e}", mean_photon(&rho));
    println!("g2(0)   = {:.6e}", g2_zero(&rho)?);
    println!("min eig = {:.3e}", rho.min_eigenvalue()?);

    let tau: Vec<f64> = (0..=20).map(|k| k as f64 * 0.25).collect();
    let series = g2_tau_from(&l, &rho, &tau)?;
    for (t, g) in series.tau.iter().zip(&series.g2) {
        println!("{t:6.2}  {g:.6e}");
    }
    Ok(())
}
