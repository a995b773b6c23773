//! `fluctua`: command-line front end for the fluctuation solver.
//!
//! Exit status is 0 on success, 2 for rejected input, 3 when a solver does
//! not converge and 4 for file errors. Failures are reported on stderr as
//! one line of JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Table;
use crate::config::{Grid, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "fluctua", version, about = "Self-consistent fluctuation corrections for phi^4 models")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in or FLUCTUA_PRESET_DIR preset to take parameters from.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shifted critical temperature, Ω_dc and the Ginzburg width as JSON.
    Critical,
    /// Tabulate one observable over a temperature grid as CSV.
    Sweep {
        /// omega, theta, chi, xi, heat_capacity, psi0 or f_T.
        #[arg(long)]
        observable: Option<String>,
        /// Temperature grid `start,stop,count`.
        #[arg(long, value_name = "START,STOP,COUNT")]
        grid: Option<String>,
    },
    /// Film Curie temperature against thickness l0 as CSV.
    Film {
        /// Thickness grid `start,stop,count`.
        #[arg(long, value_name = "START,STOP,COUNT")]
        grid: Option<String>,
    },
    /// Excess conductivity above T*_c as CSV.
    Paracond {
        /// Effective dimension: 1 (wire), 2 (film) or 3 (bulk).
        #[arg(long)]
        dim: Option<u32>,
        /// Temperature grid `start,stop,count`, entirely above T*_c.
        #[arg(long, value_name = "START,STOP,COUNT")]
        grid: Option<String>,
    },
    /// Run the brute-force validation suite; fails if any check fails.
    Oracle,
    /// Preset management.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    /// Print name, target width and description of every preset.
    List,
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Writes the table; warnings go to `<out>.warnings` or to stderr.
fn write_table(out: Option<&Path>, table: &Table) -> Result<(), CliError> {
    write_output(out, &table.csv)?;
    let sidecar = out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".warnings");
        PathBuf::from(s)
    });
    match sidecar {
        Some(path) if !table.warnings.is_empty() => {
            let text = table.warnings.join("\n") + "\n";
            std::fs::write(&path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            eprintln!("{} point(s) left empty; see {}", table.warnings.len(), path.display());
        }
        Some(path) => {
            if path.exists() {
                std::fs::remove_file(&path)?;
            }
        }
        None => table.warnings.iter().for_each(|w| eprintln!("warning: {w}")),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.out = Some(out);
    }
    let out = cfg.out.clone();
    let out = out.as_deref();
    let preset = cli.preset.as_deref();

    match cli.command {
        Command::Critical => {
            let r = cfg.resolve(preset)?;
            write_output(out, &commands::critical(&r, &cfg.settings)?)
        }
        Command::Sweep { observable, grid } => {
            if let Some(o) = observable {
                cfg.observable = Some(o);
            }
            if let Some(g) = grid {
                cfg.grid = Some(Grid::parse(&g)?);
            }
            let r = cfg.resolve(preset)?;
            write_table(out, &commands::sweep(&r, &cfg)?)
        }
        Command::Film { grid } => {
            if let Some(g) = grid {
                cfg.grid = Some(Grid::parse(&g)?);
                cfg.l0_values = None;
            }
            let r = cfg.resolve(preset)?;
            write_table(out, &commands::film(&r, &cfg)?)
        }
        Command::Paracond { dim, grid } => {
            if dim.is_some() {
                cfg.dim = dim;
            }
            if let Some(g) = grid {
                cfg.grid = Some(Grid::parse(&g)?);
            }
            let r = cfg.resolve(preset)?;
            write_table(out, &commands::paracond(&r, &cfg)?)
        }
        Command::Oracle => {
            let (text, report) = commands::oracle(&cfg)?;
            write_output(out, &text)?;
            if report.all_passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                Err(CliError::validation(format!("oracle checks failed: {}", failed.join(", "))))
            }
        }
        Command::Presets {
            action: PresetAction::List,
        } => write_output(out, &commands::presets_list()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code as u8)
        }
    }
}
