//! Anharmonicity of the lossless single-atom ladder approaching its two
//! upper bounds, g24 and √2 g13.

use eitsim::spectra::{analytic_n2_lossless, anharmonicity};
use eitsim::ModelParams;

fn lossless(g13: f64, g24: f64, omega: f64) -> ModelParams {
    ModelParams { g13, g24, omega, delta: 0.0, big_delta: 0.0, ..ModelParams::fig2() }.lossless()
}

fn main() -> eitsim::Result<()> {
    let g = 10.0;
    println!("g13 = g24 = {g}");
    for ratio in [1.0, 2.0, 5.0, 10.0, 20.0] {
        let p = lossless(g, g, g / ratio);
        let a = anharmonicity(&p)?;
        let exact = analytic_n2_lossless(&p)?[2];
        println!("  g/Ω = {ratio:>4}:  A/g = {:.5}  (closed form {:.5})", a / g, exact / g);
    }
    println!("g13 = Ω = 1");
    for ratio in [1.0, 2.0, 5.0, 10.0] {
        let a = anharmonicity(&lossless(1.0, ratio, 1.0))?;
        println!("  g24/g13 = {ratio:>4}:  A/(√2 g13) = {:.5}", a / 2f64.sqrt());
    }
    Ok(())
}
