//! Batch commands behind the `eitsim` binary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use crate::checks::{run_checks, Status};
use crate::config::{GridSpec, RunConfig};
use crate::dynamics::{build_liouvillian, g2_tau_from, g2_zero, mean_photon, steady_state};
use crate::error::{Error, Result};
use crate::model::effective_hamiltonian;
use crate::output::{write_csv, Cell, Manifest};
use crate::spectra::{
    analytic_n1, diagonalize_manifold, manifold_block, spectrum_rows, trapping_state, DressedLadder,
};
use crate::sweeps::{convergence_check, sweep_delta, ConvergenceReport};

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

/// Default τ range for `g2tau`, in units of 1/κ.
pub const DEFAULT_TAU_GRID: GridSpec = GridSpec { lo: 0.0, hi: 20.0, steps: 201 };
/// Default sweep: δ over ±1.2 g13 in this many points.
pub const DEFAULT_SWEEP_STEPS: usize = 97;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Spectra,
    Steady,
    G2tau,
    Sweep,
    Blockade,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectra => "spectra",
            Command::Steady => "steady",
            Command::G2tau => "g2tau",
            Command::Sweep => "sweep",
            Command::Blockade => "blockade",
            Command::Check => "check",
        }
    }
}

/// What a successful run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub outputs: Vec<PathBuf>,
    pub convergence_flag: bool,
    pub failed_checks: usize,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failed_checks > 0 {
            EXIT_NUMERICAL
        } else if self.convergence_flag {
            EXIT_CONVERGENCE
        } else {
            0
        }
    }
}

/// Exit status for an error.
pub fn exit_code_for(err: &Error) -> i32 {
    if err.is_config_error() || matches!(err, Error::Io { .. }) {
        EXIT_CONFIG
    } else {
        EXIT_NUMERICAL
    }
}

/// File name, CSV header and rows.
type CsvFile = (String, Vec<&'static str>, Vec<Vec<Cell>>);

struct Report {
    files: Vec<CsvFile>,
    summary: serde_json::Value,
    convergence: Option<ConvergenceReport>,
    failed_checks: usize,
}

fn convergence_json(c: &ConvergenceReport) -> serde_json::Value {
    json!({
        "n_max": c.n_max,
        "g2_low": c.g2_low,
        "g2_high": c.g2_high,
        "g2_rel_delta": c.g2_rel_delta,
        "eps0_rel_delta": c.eps0_rel_delta,
        "flagged": c.flagged,
    })
}

fn complex_json(z: num_complex::Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn spectra(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let space = p.space()?;
    let h = effective_hamiltonian(p, &space)?;
    let mut rows = Vec::new();
    for n in 1..=p.n_max.min(2) {
        let spec = diagonalize_manifold(&manifold_block(&h, n)?)?;
        let dark = if p.omega > 0.0 { Some(trapping_state(p, &space, n)?) } else { None };
        for r in spectrum_rows(&spec, dark.as_deref()) {
            rows.push(vec![r.n.into(), r.index.into(), r.re_eps.into(), r.im_eps.into(), r.overlap_eit.into()]);
        }
    }
    let mut summary = json!({});
    if p.omega > 0.0 {
        let a = analytic_n1(p)?;
        summary["analytic_n1"] = json!({
            "trapping": complex_json(a.trapping),
            "lower": complex_json(a.lower),
            "upper": complex_json(a.upper),
        });
        match DressedLadder::new(p) {
            Ok(l) => {
                summary["trapping_eigenvalue"] = complex_json(l.eit_eigenvalue());
                summary["trapping_overlap"] = json!(l.eit_overlap);
            }
            Err(e) => summary["trapping_error"] = json!(e.to_string()),
        }
    }
    Ok(Report {
        files: vec![("spectrum.csv".into(), vec!["n", "index", "re_eps", "im_eps", "overlap_eit"], rows)],
        summary,
        convergence: None,
        failed_checks: 0,
    })
}

fn steady(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let space = p.space()?;
    let l = build_liouvillian(p, &space)?;
    let rho = steady_state(&l)?;
    let n = mean_photon(&rho);
    let g2 = if p.eps_p > 0.0 { g2_zero(&rho)? } else { f64::NAN };
    let row = vec![
        n.into(),
        g2.into(),
        rho.trace().re.into(),
        rho.min_eigenvalue()?.into(),
        l.residual(&rho).into(),
    ];
    let convergence = if p.eps_p > 0.0 { Some(convergence_check(p)?) } else { None };
    Ok(Report {
        files: vec![(
            "steady.csv".into(),
            vec!["mean_photon", "g2_zero", "trace", "min_eigenvalue", "residual"],
            vec![row],
        )],
        summary: json!({ "mean_photon": n, "g2_zero": g2 }),
        convergence,
        failed_checks: 0,
    })
}

fn g2tau(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let grid = cfg.grid.unwrap_or(DEFAULT_TAU_GRID);
    if grid.lo < 0.0 {
        return Err(Error::Config(format!("tau grid must start at >= 0, got {}", grid.lo)));
    }
    let space = p.space()?;
    let l = build_liouvillian(p, &space)?;
    let rho = steady_state(&l)?;
    let series = g2_tau_from(&l, &rho, &grid.points())?;
    let rows = series.tau.iter().zip(&series.g2).map(|(&t, &g)| vec![t.into(), g.into()]).collect();
    Ok(Report {
        files: vec![("g2tau.csv".into(), vec!["tau", "g2"], rows)],
        summary: json!({ "mean_photon": series.mean_photon, "points": series.tau.len() }),
        convergence: Some(convergence_check(p)?),
        failed_checks: 0,
    })
}

fn sweep(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let grid = cfg.grid.unwrap_or(GridSpec {
        lo: -1.2 * p.g13,
        hi: 1.2 * p.g13,
        steps: DEFAULT_SWEEP_STEPS,
    });
    let result = sweep_delta(p, &grid.points())?;
    let rows = result
        .records
        .iter()
        .map(|r| {
            vec![
                r.delta.into(),
                r.g2_zero.into(),
                r.mean_photon.into(),
                r.eit_linewidth.into(),
                r.anharmonicity.into(),
                r.p.into(),
                r.error.clone().unwrap_or_default().into(),
            ]
        })
        .collect();
    Ok(Report {
        files: vec![(
            "sweep.csv".into(),
            vec!["delta", "g2_zero", "mean_photon", "eit_linewidth", "anharmonicity", "P", "error"],
            rows,
        )],
        summary: json!({ "points": result.records.len(), "failures": result.failures() }),
        convergence: Some(convergence_check(p)?),
        failed_checks: 0,
    })
}

fn blockade(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let ladder = DressedLadder::new(p)?;
    let report = ladder.blockade(p.eps_p)?;
    let rows = report
        .rates
        .iter()
        .map(|&(f, w)| {
            let e = ladder.two.eigenvalues[f];
            vec![f.into(), e.re.into(), e.im.into(), w.into()]
        })
        .collect();
    Ok(Report {
        files: vec![("blockade.csv".into(), vec!["final_state", "re_eps", "im_eps", "rate"], rows)],
        summary: json!({
            "P": report.p,
            "w01": report.w01,
            "anharmonicity": report.anharmonicity,
            "trapping_eigenvalue": complex_json(ladder.eit_eigenvalue()),
        }),
        convergence: None,
        failed_checks: 0,
    })
}

fn check(cfg: &RunConfig) -> Result<Report> {
    let lines = run_checks(&cfg.params);
    for l in &lines {
        println!("{l}");
    }
    let failed = lines.iter().filter(|l| l.status == Status::Fail).count();
    let rows = lines
        .iter()
        .map(|l| {
            let status = match l.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            vec![l.name.into(), status.into(), l.value.into(), l.tolerance.into(), l.note.clone().into()]
        })
        .collect();
    Ok(Report {
        files: vec![("checks.csv".into(), vec!["property", "status", "value", "tolerance", "note"], rows)],
        summary: json!({ "checks": lines.len(), "failed": failed }),
        convergence: None,
        failed_checks: failed,
    })
}

/// Runs `command`, writing CSV output and `manifest.json` into `out_dir`.
pub fn run_command(cfg: &RunConfig, command: Command, out_dir: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let report = match command {
        Command::Spectra => spectra(cfg)?,
        Command::Steady => steady(cfg)?,
        Command::G2tau => g2tau(cfg)?,
        Command::Sweep => sweep(cfg)?,
        Command::Blockade => blockade(cfg)?,
        Command::Check => check(cfg)?,
    };
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut outputs = Vec::new();
    for (name, header, rows) in &report.files {
        let path = out_dir.join(name);
        write_csv(&path, header, rows)?;
        outputs.push(path);
    }
    let mut summary = report.summary;
    let convergence_flag = report.convergence.as_ref().is_some_and(|c| c.flagged);
    if let Some(c) = &report.convergence {
        summary["convergence"] = convergence_json(c);
        if c.flagged {
            log::warn!(
                "truncation at n_max = {} is not converged (g2 changes by {:.2e})",
                c.n_max,
                c.g2_rel_delta
            );
        }
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command.name().into(),
        config: cfg.to_text(),
        params: cfg.params,
        outputs: report.files.iter().map(|f| f.0.clone()).collect(),
        wall_time_s: start.elapsed().as_secs_f64(),
        summary,
    };
    let manifest_path = out_dir.join("manifest.json");
    manifest.write(&manifest_path)?;
    outputs.push(manifest_path);
    Ok(RunOutcome {
        outputs,
        convergence_flag,
        failed_checks: report.failed_checks,
    })
}
