//! `sidsim`: run scenario files, figure presets and SID assignment plans.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sid_core::experiment::{optimize, parse_objective, run_preset, run_sweep, simulate};
use sid_core::{load_scenario, Error, ResultTable};

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sidsim",
    version,
    about = "Surveillance and intervention of suspicious wireless links"
)]
struct Cli {
    /// Seed for fading draws; overrides the scenario's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every SID against every suspicious link.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the scenario's sweep section.
    Sweep {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce a built-in figure.
    Figure {
        #[arg(value_parser = ["fig4", "fig6"])]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assign SIDs to links and modes.
    Optimize {
        scenario: PathBuf,
        /// max-eav-rate or min-malicious-rate
        #[arg(long)]
        objective: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(table: &ResultTable, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => table.write(p),
        None => std::io::stdout()
            .write_all(table.to_csv().as_bytes())
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let Format::Csv = cli.format;
    match cli.command {
        Command::Simulate { scenario, out } => {
            let loaded = load_scenario(&scenario)?;
            let seed = cli.seed.or(loaded.seed).unwrap_or(0);
            emit(&simulate(&loaded, seed)?, out.as_deref())?;
        }
        Command::Sweep { scenario, out } => {
            let loaded = load_scenario(&scenario)?;
            let t = run_sweep(&loaded, &out)?;
            eprintln!("wrote {} rows to {}", t.rows().len(), out.display());
        }
        Command::Figure { name, out } => {
            let t = run_preset(&name)?;
            t.write(&out)?;
            eprintln!("wrote {} rows to {}", t.rows().len(), out.display());
        }
        Command::Optimize {
            scenario,
            objective,
            out,
        } => {
            let objective = parse_objective(&objective)?;
            let loaded = load_scenario(&scenario)?;
            let (plan, t) = optimize(&loaded, objective)?;
            emit(&t, out.as_deref())?;
            if !plan.feasible {
                eprintln!("no assignment meets every interference cap");
                return Ok(EXIT_INFEASIBLE);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { EXIT_VALIDATION } else { EXIT_IO })
        }
    }
}
