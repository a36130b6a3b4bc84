//! Steady-state and correlation behaviour at the reference parameter sets.

use eitsim::dynamics::{
    build_liouvillian, g2_zero, mean_photon, propagate, steady_state, DensityMatrix,
};
use eitsim::spectra::DressedLadder;
use eitsim::sweeps::{convergence_check, g2_tau_profile, linspace, sweep_delta};
use eitsim::ModelParams;

#[test]
fn single_atom_correlation_rises_after_a_short_dip() {
    let series = g2_tau_profile(&ModelParams::fig2(), 20.0, 41).unwrap();
    let g0 = series.g2[0];
    assert!(g0 <= 1e-2);
    assert!(series.g2.iter().all(|&g| g >= -1e-8));
    // the fast bright-state beat pulls g2 below its origin first
    assert!(series.g2[1] < g0);
    for (t, g) in series.tau.iter().zip(&series.g2) {
        if *t >= 3.0 {
            assert!(*g > g0, "g2({t}) = {g} not above g2(0) = {g0}");
        }
    }
    assert!(*series.g2.last().unwrap() > 10.0 * g0);
}

#[test]
fn single_atom_correlation_relaxes_on_the_trapping_timescale() {
    let p = ModelParams::fig2();
    let width = -DressedLadder::new(&p).unwrap().eit_eigenvalue().im;
    let series = g2_tau_profile(&p, 20.0 / width, 201).unwrap();
    let tail = &series.g2[181..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    assert!((mean - 1.0).abs() <= 0.05, "tail mean {mean}");
}

/// `<n>/ε²` and g2(0) at each drive strength.
fn drive_response(delta: f64, drives: &[f64]) -> (Vec<f64>, Vec<f64>) {
    drives
        .iter()
        .map(|&eps_p| {
            let p = ModelParams { eps_p, ..ModelParams::fig3(delta) };
            let rho = steady_state(&build_liouvillian(&p, &p.space().unwrap()).unwrap()).unwrap();
            (mean_photon(&rho) / (eps_p * eps_p), g2_zero(&rho).unwrap())
        })
        .unzip()
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().cloned().fold(f64::MIN, f64::max);
    let min = v.iter().cloned().fold(f64::MAX, f64::min);
    (max - min) / min
}

#[test]
fn weak_drive_scaling_at_the_two_atom_set() {
    for delta in [0.0, 7.5] {
        let (n, g2) = drive_response(delta, &[0.00125, 0.0025, 0.005]);
        assert!(spread(&n) <= 0.05, "δ={delta}: n/ε² {n:?}");
        assert!(spread(&g2) < 0.10, "δ={delta}: g2 {g2:?}");
        // transparent on the trapping line: the empty-cavity photon number
        assert!((n[0] - 1.0).abs() <= 0.01, "δ={delta}: n/ε² {n:?}");
    }
}

#[test]
fn trapping_line_saturates_near_the_caption_drive() {
    // the ~0.006κ-wide line saturates as 1/(1 + (ε/0.055κ)²), so the
    // scaling already bends by ~12% across 0.005κ..0.02κ
    let (n, g2) = drive_response(7.5, &[0.005, 0.01, 0.02]);
    assert!(spread(&n) > 0.05 && spread(&n) < 0.15, "n/ε² {n:?}");
    assert!(spread(&g2) > 0.10, "g2 {g2:?}");
    let eps_s = 0.02 / (1.0 / n[2] - 1.0).sqrt();
    assert!((eps_s - 0.055).abs() < 0.005, "saturation drive {eps_s}");
}

#[test]
fn detuning_sweep_is_mirror_symmetric() {
    let result = sweep_delta(&ModelParams::fig3(0.0), &[-7.5, -3.0, 3.0, 7.5]).unwrap();
    assert_eq!(result.failures(), 0);
    let r = &result.records;
    for (lo, hi) in [(0, 3), (1, 2)] {
        for (a, b) in [
            (r[lo].g2_zero, r[hi].g2_zero),
            (r[lo].mean_photon, r[hi].mean_photon),
            (r[lo].p, r[hi].p),
            (r[lo].anharmonicity, r[hi].anharmonicity),
        ] {
            assert!((a - b).abs() <= 0.01 * a.abs().max(b.abs()), "{a} vs {b}");
        }
    }
    assert!(r[3].g2_zero <= 1e-2);
}

#[test]
fn sweep_points_are_reproducible() {
    let grid = linspace(-2.0, 2.0, 3);
    let p = ModelParams { n_max: 2, ..ModelParams::fig2() };
    let a = sweep_delta(&p, &grid).unwrap();
    let b = sweep_delta(&p, &grid).unwrap();
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.g2_zero.to_bits(), y.g2_zero.to_bits());
        assert_eq!(x.p.to_bits(), y.p.to_bits());
    }
}

#[test]
fn propagation_preserves_trace() {
    let p = ModelParams::fig2();
    let space = p.space().unwrap();
    let l = build_liouvillian(&p, &space).unwrap();
    let rho0 = DensityMatrix::ground(space);
    assert_eq!(propagate(&l, &rho0, 0.0).unwrap().trace_distance(&rho0).unwrap(), 0.0);
    for t in [0.5, 5.0, 50.0] {
        let rho = propagate(&l, &rho0, t).unwrap();
        assert!((rho.trace() - 1.0).norm() <= 1e-8);
    }
}

#[test]
fn truncation_converged_at_the_two_atom_set() {
    let c = convergence_check(&ModelParams::fig3(7.5)).unwrap();
    assert!(!c.flagged, "{c:?}");
}
