//! `vertexcalc`: series tables and exact identity verifiers for the free boson.
//!
//! Exit status: 0 when every checked cell passes, 1 on any violation, 2 on usage or
//! configuration errors.

mod config;
mod run;

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Cells, Command, Format, RunConfig};

#[derive(Parser)]
#[command(name = "vertexcalc", version, about = "Exact free boson formal calculus: tables and identity verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Which compared cells to keep in the report (JSON keeps nontrivial cells by default;
    /// text lists passing cells only when this is given).
    #[arg(long, global = true, value_enum)]
    cells: Option<Cells>,
    /// Read the run from a JSON file instead of a subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load(cli: Cli) -> Result<RunConfig, String> {
    let mut config = match (cli.config, cli.command) {
        (Some(_), Some(_)) => return Err("give either --config or a subcommand, not both".into()),
        (None, None) => return Err("no subcommand given (see --help)".into()),
        (None, Some(command)) => RunConfig { command, format: None, output: None, cells: None },
        (Some(path), None) => {
            let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
    };
    config.format = cli.format.or(config.format);
    config.output = cli.output.or(config.output);
    config.cells = cli.cells.or(config.cells);
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load(cli) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let outcome = match run::run(&config) {
        Ok(o) => o,
        Err(e) => return usage_error(e),
    };
    match &config.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                return usage_error(format!("{}: {e}", path.display()));
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(outcome.text.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != ErrorKind::BrokenPipe {
                    return usage_error(e);
                }
            }
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
