//! `tgd`: generate TGD operators and apply them to signals, images and volumes.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 I/O error.
//! `TGD_THREADS` caps the worker threads; outputs do not depend on it.

mod args;
mod commands;
mod error;
mod io;
mod ops;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Settings};
use error::{CliError, CliResult};

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("TGD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("TGD_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> CliResult<()> {
    init_threads()?;
    let settings = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::GenOp(a) => commands::gen_op(&settings, a),
        Command::Apply(a) => commands::apply(&settings, a),
        Command::Noise(a) => commands::noise(&settings, a),
        Command::Metrics(a) => commands::metrics(&settings, a),
        Command::Spectrum(a) => commands::spectrum_cmd(&settings, a),
        Command::ValidateKernel(a) => commands::validate_kernel(&settings, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tgd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
