//! Invariant suite of the master equation at the single-atom set, the same
//! lines the `check` command prints.

use eitsim::checks::run_checks;
use eitsim::ModelParams;

fn main() {
    let p = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("delta"))
        .map_or_else(ModelParams::fig2, ModelParams::fig3);
    for line in run_checks(&p) {
        println!("{line}");
    }
}
