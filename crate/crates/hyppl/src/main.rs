//! `hyppl <command> --config <path> [--out <path>] [--format json|csv] [--ablate-discrete]`
//!
//! Exit status: 0 every check passed, 1 a check failed, 2 configuration
//! error, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod run;

use clap::Parser;
use config::{parse_config, Command, Format};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "hyppl",
    version,
    about = "Numerical checks of the Plancherel formula for line bundles over SL(2,R)/H"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Flat TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Report path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Drop the discrete spectrum (debugging; the checks are expected to fail).
    #[arg(long)]
    ablate_discrete: bool,
}

const CONFIG_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("hyppl: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let mut cfg = match parse_config(&text, Some(cli.command)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("hyppl: {}: {e}", cli.config.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    cfg.ablate_discrete = cli.ablate_discrete;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.out.is_some() {
        cfg.output_path = cli.out;
    }

    let report = run::run(&cfg);
    let doc = match cfg.format {
        Format::Json => run::render_json(&report),
        Format::Csv => run::render_csv(&report),
    };
    match &cfg.output_path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, doc) {
                eprintln!("hyppl: cannot write {}: {e}", p.display());
                return ExitCode::from(CONFIG_ERROR);
            }
        }
        None => print!("{doc}"),
    }
    if let Some(e) = &report.error {
        eprintln!("hyppl: numerical failure: {e}");
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("hyppl: check {} failed: {:e} > {:e}", c.name, c.value, c.tolerance);
    }
    ExitCode::from(report.status.exit_code() as u8)
}
