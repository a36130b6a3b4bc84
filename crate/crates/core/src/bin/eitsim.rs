use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use eitsim::cli::{exit_code_for, run_command, Command, EXIT_CONFIG};
use eitsim::config::GridSpec;
use eitsim::load_config;

/// Cavity-EIT photon blockade simulator.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    command: Command,
    /// Flat `key = value` parameter file.
    config: PathBuf,
    /// Output directory for CSV files and manifest.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Fock-space cutoff, overriding the config.
    #[arg(long)]
    nmax: Option<usize>,
    /// Grid `lo:hi:steps` (δ for sweep, τ for g2tau), overriding the config.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    // the dense kernels stay single-threaded so results do not depend on the machine
    faer::set_global_parallelism(faer::Par::Seq);

    let mut cfg = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return code(exit_code_for(&e));
        }
    };
    if let Some(n) = args.nmax {
        cfg.params.n_max = n;
    }
    if args.grid.is_some() {
        cfg.grid = args.grid;
    }
    match run_command(&cfg, args.command, &args.out) {
        Ok(outcome) => {
            for p in &outcome.outputs {
                println!("wrote {}", p.display());
            }
            code(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            code(exit_code_for(&e))
        }
    }
}
