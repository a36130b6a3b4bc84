//! Dispersive level shift of the two-trapping-excitation state: full
//! four-level model, Kerr replacement and the closed forms.

use eitsim::spectra::{kerr_shift_numeric, perturbative_shift, ShiftModel};
use eitsim::ModelParams;

fn main() -> eitsim::Result<()> {
    let base = ModelParams::fig2();
    let cases = [
        ("one atom, δ=0", ModelParams { big_delta: 50.0 * base.g24, ..base }),
        ("two atoms, δ=g", ModelParams { n_atoms: 2, delta: base.g13, big_delta: 50.0 * base.g24, ..base }),
        ("two atoms, δ=0", ModelParams { n_atoms: 2, big_delta: 50.0 * base.g24, ..base }),
    ];
    println!("chi = {:.4}", base.g24.powi(2) / (50.0 * base.g24));
    for (name, p) in cases {
        let four = kerr_shift_numeric(&p, ShiftModel::FourLevel)?;
        let kerr = kerr_shift_numeric(&p, ShiftModel::Kerr)?;
        let formula = perturbative_shift(&p)?;
        println!(
            "{name:<16} four-level {four:+.5e}  kerr {kerr:+.5e}  closed form {:+.5e} ({:?})",
            formula.value, formula.branch
        );
    }
    Ok(())
}
