//! n=1 and n=2 dressed manifolds of the single-atom system, next to the
//! closed-form n=1 eigenvalues.

use eitsim::model::effective_hamiltonian;
use eitsim::spectra::{analytic_n1, diagonalize_manifold, manifold_block, spectrum_rows, trapping_state};
use eitsim::ModelParams;

fn main() -> eitsim::Result<()> {
    let p = ModelParams { n_max: 2, ..ModelParams::fig2() };
    let space = p.space()?;
    let h = effective_hamiltonian(&p, &space)?;
    println!("alpha = {:.2}", p.alpha()?);
    for n in 1..=2 {
        let spec = diagonalize_manifold(&manifold_block(&h, n)?)?;
        let dark = trapping_state(&p, &space, n)?;
        println!("n={n}  (bi-orthonormality error {:.1e})", spec.biorthogonality_error());
        for row in spectrum_rows(&spec, Some(&dark)) {
            let v = spec.right_vector(row.index);
            let main = (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
            println!(
                "  {:>2}  {:>+10.5} {:>+10.5}i  overlap {:.3}   mostly {}",
                row.index, row.re_eps, row.im_eps, row.overlap_eit, spec.labels[main]
            );
        }
    }
    let a = analytic_n1(&p)?;
    println!("closed form n=1:");
    for e in a.as_array() {
        println!("      {:>+10.5} {:>+10.5}i", e.re, e.im);
    }
    Ok(())
}
