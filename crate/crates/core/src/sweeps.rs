//! Batch experiments over parameter grids.
//!
//! Grid points are independent; they run on a rayon pool whose size can be
//! capped with `EITSIM_THREADS`. Results are always returned in grid order.

use rayon::prelude::*;

use crate::dynamics::{
    build_liouvillian, g2_tau_from, g2_zero, mean_photon, steady_state, CorrelationSeries,
};
use crate::error::{Error, Result};
use crate::model::{effective_hamiltonian, ModelParams};
use crate::spectra::{
    diagonalize_manifold, kerr_shift_numeric, manifold_block, perturbative_shift, trapping_state,
    DressedLadder, ShiftModel,
};

/// Environment variable limiting worker threads.
pub const THREADS_ENV: &str = "EITSIM_THREADS";
/// Relative change that raises the truncation flag.
pub const CONVERGENCE_TOL: f64 = 1e-3;

/// One grid point of a detuning sweep. Failed points carry NaN fields and
/// the error message.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub delta: f64,
    pub g2_zero: f64,
    pub mean_photon: f64,
    pub eit_linewidth: f64,
    pub anharmonicity: f64,
    pub p: f64,
    /// Perturbative shift; NaN when `big_delta = 0`.
    pub shift_eq9: f64,
    /// Numerical shift of the two-excitation trapping state; NaN when
    /// `big_delta = 0`.
    pub shift_numeric: f64,
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(delta: f64, err: &Error) -> Self {
        SweepRecord {
            delta,
            g2_zero: f64::NAN,
            mean_photon: f64::NAN,
            eit_linewidth: f64::NAN,
            anharmonicity: f64::NAN,
            p: f64::NAN,
            shift_eq9: f64::NAN,
            shift_numeric: f64::NAN,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub axis: String,
    pub grid: Vec<f64>,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Rayon pool honouring `EITSIM_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// `steps` evenly spaced points from `lo` to `hi`, endpoints exact.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

/// Everything recorded at one parameter point.
pub fn evaluate_point(p: &ModelParams) -> Result<SweepRecord> {
    let space = p.space()?;
    let l = build_liouvillian(p, &space)?;
    let rho = steady_state(&l)?;
    let ladder = DressedLadder::new(p)?;
    let blockade = ladder.blockade(p.eps_p)?;
    let (shift_eq9, shift_numeric) = if p.big_delta != 0.0 {
        (
            perturbative_shift(p)?.value,
            kerr_shift_numeric(p, ShiftModel::FourLevel)?,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(SweepRecord {
        delta: p.delta,
        g2_zero: g2_zero(&rho)?,
        mean_photon: mean_photon(&rho),
        eit_linewidth: -ladder.eit_eigenvalue().im,
        anharmonicity: blockade.anharmonicity,
        p: blockade.p,
        shift_eq9,
        shift_numeric,
        error: None,
    })
}

/// Sweeps the probe detuning δ, keeping every other parameter of `p`.
pub fn sweep_delta(p: &ModelParams, grid: &[f64]) -> Result<SweepResult> {
    p.validate_dissipative()?;
    if grid.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("sweep grid must be strictly increasing".into()));
    }
    let edge = (p.n_atoms as f64 * p.g13 * p.g13 + p.omega * p.omega).sqrt();
    if grid.iter().any(|d| d.abs() >= edge) {
        log::warn!("sweep reaches |delta| >= {edge:.4}, beyond the bright polaritons");
    }
    let pool = thread_pool()?;
    let records = pool.install(|| {
        grid.par_iter()
            .map(|&delta| {
                let q = ModelParams { delta, ..*p };
                evaluate_point(&q).unwrap_or_else(|e| SweepRecord::failed(delta, &e))
            })
            .collect()
    });
    Ok(SweepResult {
        axis: "delta".into(),
        grid: grid.to_vec(),
        records,
    })
}

/// `g²(τ)` on `steps` uniform points of `[0, tau_max]`.
pub fn g2_tau_profile(p: &ModelParams, tau_max: f64, steps: usize) -> Result<CorrelationSeries> {
    if steps < 2 {
        return Err(Error::Config(format!("g2 profile needs at least 2 steps, got {steps}")));
    }
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(Error::Config(format!("tau_max must be positive, got {tau_max}")));
    }
    p.validate_dissipative()?;
    let space = p.space()?;
    let l = build_liouvillian(p, &space)?;
    let rho = steady_state(&l)?;
    g2_tau_from(&l, &rho, &linspace(0.0, tau_max, steps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub n_max: usize,
    pub g2_low: f64,
    pub g2_high: f64,
    pub g2_rel_delta: f64,
    pub eps0_low: f64,
    pub eps0_high: f64,
    pub eps0_rel_delta: f64,
    pub flagged: bool,
}

fn trapping_linewidth(p: &ModelParams) -> Result<f64> {
    let space = p.space()?;
    let h = effective_hamiltonian(p, &space)?;
    let spec = diagonalize_manifold(&manifold_block(&h, 1)?)?;
    let k = spec.identify(&trapping_state(p, &space, 1)?)?;
    Ok(spec.eigenvalues[k].im)
}

fn g2_at(p: &ModelParams) -> Result<f64> {
    let space = p.space()?;
    g2_zero(&steady_state(&build_liouvillian(p, &space)?)?)
}

/// Compares g²(0) and the trapping-state linewidth at `n_max` and
/// `n_max + 1`.
pub fn convergence_check(p: &ModelParams) -> Result<ConvergenceReport> {
    if p.n_max < 2 {
        return Err(Error::param("n_max", "convergence check needs n_max >= 2"));
    }
    let high = ModelParams { n_max: p.n_max + 1, ..*p };
    let (g2_low, g2_high) = (g2_at(p)?, g2_at(&high)?);
    let (eps0_low, eps0_high) = (trapping_linewidth(p)?, trapping_linewidth(&high)?);
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (b - a).abs() / a.abs().max(b.abs()) };
    let g2_rel_delta = rel(g2_low, g2_high);
    let eps0_rel_delta = rel(eps0_low, eps0_high);
    Ok(ConvergenceReport {
        n_max: p.n_max,
        g2_low,
        g2_high,
        g2_rel_delta,
        eps0_low,
        eps0_high,
        eps0_rel_delta,
        flagged: !(g2_rel_delta <= CONVERGENCE_TOL && eps0_rel_delta <= CONVERGENCE_TOL),
    })
}
