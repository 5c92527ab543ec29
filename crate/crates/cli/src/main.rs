//! `phasecat`: batch runs of the transition-layer library writing JSON and
//! CSV artifacts.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phase_catenoid::Exec;

use crate::config::{parse_modes, ConfigError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "phasecat", version, about = "Transition layers along catenoids in axisymmetric containers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults apply to omitted keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, overriding `out_dir` of the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; more than one runs independent α members concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile constants and the (t, w, w', ψ₁, ψ₁') table.
    Profile {
        /// Half-width of the table.
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Critical placement, boundary determinant and Jacobi–Robin spectrum.
    Place {
        /// Fourier modes, e.g. `0..3` or `0,2`.
        #[arg(long)]
        modes: Option<String>,
    },
    /// Residual-order study of the constructed approximation.
    Residual,
    /// Newton continuation from the approximation over the α list.
    Solve,
}

fn load(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    match &cli.command {
        Command::Profile { tmax: Some(t) } => cfg.t_max = *t,
        Command::Place { modes: Some(m) } => cfg.modes = parse_modes(m)?,
        _ => {}
    }
    if cli.jobs == 0 {
        return Err(ConfigError("--jobs must be at least 1".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn executor(jobs: usize) -> Exec {
    if jobs == 1 {
        return Exec::Sequential;
    }
    #[cfg(feature = "parallel")]
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("warning: thread pool already initialised: {e}");
        }
        Exec::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    {
        eprintln!("warning: built without the parallel feature, running sequentially");
        Exec::Sequential
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let exec = executor(cli.jobs);
    let result = match cli.command {
        Command::Profile { .. } => commands::cmd_profile(&cfg),
        Command::Place { .. } => commands::cmd_place(&cfg),
        Command::Residual => commands::cmd_residual(&cfg, exec),
        Command::Solve => commands::cmd_solve(&cfg, exec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(1)
        }
    }
}
