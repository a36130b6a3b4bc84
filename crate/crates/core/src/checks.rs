//! Invariant suite behind the `check` command.

use std::fmt;

use faer::Mat;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    build_liouvillian, g2_tau_from, g2_zero, propagate, steady_state, DensityMatrix, Liouvillian,
};
use crate::error::Result;
use crate::hilbert::Operator;
use crate::model::{effective_hamiltonian, excitation_number, hermitian_hamiltonian, ModelParams};
use crate::spectra::{diagonalize_manifold, manifold_block, trapping_state, DressedLadder};
use crate::sweeps::convergence_check;

const RANDOM_STATES: usize = 100;
const SEED: u64 = 0xe17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    pub note: String,
}

impl CheckLine {
    /// Passes when `value <= tolerance`.
    fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        let status = if value <= tolerance { Status::Pass } else { Status::Fail };
        CheckLine { name, status, value, tolerance, note: String::new() }
    }

    fn at_least(name: &'static str, value: f64, bound: f64) -> Self {
        let status = if value >= bound { Status::Pass } else { Status::Fail };
        CheckLine { name, status, value, tolerance: bound, note: String::new() }
    }

    fn skipped(name: &'static str, why: impl Into<String>) -> Self {
        CheckLine { name, status: Status::Skip, value: f64::NAN, tolerance: f64::NAN, note: why.into() }
    }

    fn errored(name: &'static str, err: impl fmt::Display) -> Self {
        CheckLine { name, status: Status::Fail, value: f64::NAN, tolerance: f64::NAN, note: err.to_string() }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {:<28} value={:.3e} tol={:.1e}", self.name, self.value, self.tolerance)?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> Mat<C64> {
    let raw = Mat::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = Mat::from_fn(d, d, |i, j| (raw[(i, j)] + raw[(j, i)].conj()) * 0.5);
    let norm = h.norm_l2();
    Mat::from_fn(d, d, |i, j| h[(i, j)] / norm)
}

/// Worst `|Tr(Lρ)|` and `‖Lρ − (Lρ)†‖` over random unit-norm Hermitian states.
pub fn superoperator_properties(l: &Liouvillian, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let d = l.space().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut trace, mut herm) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let rho = DensityMatrix::from_matrix(*l.space(), random_hermitian(&mut rng, d))?;
        let out = DensityMatrix::from_matrix(*l.space(), l.apply(&rho))?;
        trace = trace.max(out.trace().norm());
        herm = herm.max(out.hermiticity_error());
    }
    Ok((trace, herm))
}

fn lossless_null_residual(p: &ModelParams, n: usize) -> Result<f64> {
    let q = ModelParams {
        n_max: 2,
        kappa: 0.0,
        gamma31: 0.0,
        gamma32: 0.0,
        delta: 0.0,
        g24: if n == 2 { 0.0 } else { p.g24 },
        ..*p
    };
    let space = q.space()?;
    let h = effective_hamiltonian(&q, &space)?;
    let v = trapping_state(&q, &space, n)?;
    Ok(h.apply(&v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

fn spectral_checks(p: &ModelParams, out: &mut Vec<CheckLine>) -> Result<()> {
    let space = p.space()?;
    let h = hermitian_hamiltonian(p, &space, true)?;
    out.push(CheckLine::at_most("hamiltonian_hermitian", h.hermiticity_error(), 1e-12));
    let heff = effective_hamiltonian(p, &space)?;
    let comm: Operator = heff.commutator(&excitation_number(&space));
    out.push(CheckLine::at_most("excitation_conserved", comm.max_abs(), 1e-12));

    let (mut im_max, mut biorth) = (f64::NEG_INFINITY, 0.0f64);
    for n in 1..=p.n_max.min(2) {
        let spec = diagonalize_manifold(&manifold_block(&heff, n)?)?;
        im_max = spec.eigenvalues.iter().map(|e| e.im).fold(im_max, f64::max);
        biorth = biorth.max(spec.biorthogonality_error());
    }
    out.push(CheckLine::at_most("dissipative_spectrum", im_max, 1e-10));
    out.push(CheckLine::at_most("biorthonormality", biorth, 1e-8));

    if p.omega > 0.0 {
        out.push(CheckLine::at_most("trapping_null_n1", lossless_null_residual(p, 1)?, 1e-10));
        out.push(CheckLine::at_most("trapping_null_n2", lossless_null_residual(p, 2)?, 1e-10));
    } else {
        out.push(CheckLine::skipped("trapping_null_n1", "omega = 0"));
        out.push(CheckLine::skipped("trapping_null_n2", "omega = 0"));
    }
    Ok(())
}

fn dynamics_checks(p: &ModelParams, out: &mut Vec<CheckLine>) -> Result<()> {
    let space = p.space()?;
    let l = build_liouvillian(p, &space)?;
    let (trace, herm) = superoperator_properties(&l, RANDOM_STATES, SEED)?;
    out.push(CheckLine::at_most("trace_annihilation", trace, 1e-10));
    out.push(CheckLine::at_most("hermiticity_preservation", herm, 1e-10));

    let rho = steady_state(&l)?;
    out.push(CheckLine::at_most("steady_residual", l.residual(&rho), 1e-9));
    out.push(CheckLine::at_most("steady_trace", (rho.trace() - 1.0).norm(), 1e-10));
    out.push(CheckLine::at_most("steady_hermitian", rho.hermiticity_error(), 1e-10));
    out.push(CheckLine::at_least("steady_positivity", rho.min_eigenvalue()?, -1e-8));

    // long enough for the narrow trapping line to relax many times over
    let t_long = DressedLadder::new(p)
        .map(|lad| 60.0 / lad.eit_eigenvalue().im.abs())
        .unwrap_or(f64::INFINITY)
        .clamp(200.0, 1e5);
    let late = propagate(&l, &DensityMatrix::ground(space), t_long)?;
    out.push(CheckLine::at_most("propagate_vs_steady", late.trace_distance(&rho)?, 1e-6));

    if p.eps_p > 0.0 {
        let g0 = g2_zero(&rho)?;
        let series = g2_tau_from(&l, &rho, &[0.0, t_long])?;
        out.push(CheckLine::at_most("g2_tau_origin", (series.g2[0] - g0).abs() / g0.abs(), 1e-8));
        out.push(CheckLine::at_most("g2_long_time", (series.g2[1] - 1.0).abs(), 0.02));
        match convergence_check(p) {
            Ok(c) => out.push(CheckLine::at_most(
                "truncation",
                c.g2_rel_delta.max(c.eps0_rel_delta),
                1e-3,
            )),
            Err(e) => out.push(CheckLine::errored("truncation", e)),
        }
    } else {
        for name in ["g2_tau_origin", "g2_long_time", "truncation"] {
            out.push(CheckLine::skipped(name, "eps_p = 0"));
        }
    }
    Ok(())
}

/// Runs every invariant for the parameter set; numerical errors become
/// failed lines rather than aborting the suite.
pub fn run_checks(p: &ModelParams) -> Vec<CheckLine> {
    let mut out = Vec::new();
    if let Err(e) = spectral_checks(p, &mut out) {
        out.push(CheckLine::errored("spectral_suite", e));
    }
    if let Err(e) = dynamics_checks(p, &mut out) {
        out.push(CheckLine::errored("dynamics_suite", e));
    }
    out
}
