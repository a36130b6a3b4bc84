//! Basis layout and elementary operators of a small space.

use eitsim::hilbert::{annihilator, atomic_sigma, build_space, creator};
use eitsim::model::excitation_number;

fn main() -> eitsim::Result<()> {
    let space = build_space(2, 1)?;
    println!("dim {}", space.dim());
    let n_exc = excitation_number(&space);
    for (i, label) in space.labels().enumerate().take(8) {
        println!("  {i:>2}  {label}  N_exc = {}", n_exc.get(i, i).re);
    }
    let a = annihilator(&space);
    let comm = a.commutator(&creator(&space));
    println!("[a, a+] on the vacuum sector: {}", comm.get(0, 0));
    let s21 = atomic_sigma(&space, 2, 1, 1)?;
    println!("sigma21 on atom 1: {} nonzeros", s21.nnz());
    Ok(())
}
