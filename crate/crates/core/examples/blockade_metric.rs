//! Golden-rule blockade figure P, resolved by final state.

use eitsim::spectra::DressedLadder;
use eitsim::ModelParams;

fn report(name: &str, p: &ModelParams) -> eitsim::Result<()> {
    let ladder = DressedLadder::new(p)?;
    let b = ladder.blockade(p.eps_p)?;
    println!("{name}: P = {:.4e}, W01 = {:.4e}, A = {:.4}", b.p, b.w01, b.anharmonicity);
    for &(f, w) in &b.rates {
        let e = ladder.two.eigenvalues[f];
        if w > 1e-3 * b.w01 * b.p {
            println!("    {f:>2}  eps = {:+9.4} {:+8.4}i   W = {w:.3e}", e.re, e.im);
        }
    }
    Ok(())
}

fn main() -> eitsim::Result<()> {
    report("one atom", &ModelParams { n_atoms: 1, ..ModelParams::fig3(7.5) })?;
    report("two atoms, δ=g", &ModelParams::fig3(7.5))?;
    report("two atoms, δ=0", &ModelParams::fig3(0.0))?;
    report("harmonic, g24=0", &ModelParams { g24: 0.0, ..ModelParams::fig2() })?;
    Ok(())
}
