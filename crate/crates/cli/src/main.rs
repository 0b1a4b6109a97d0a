mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "racklab", version, about = "Subrack lattices of finite groups and their homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Limits {
    /// Largest group order to build or include.
    #[arg(long, env = "RACKLAB_MAX_ORDER")]
    max_order: Option<usize>,
    /// Largest number of subracks to enumerate per lattice.
    #[arg(long, env = "RACKLAB_BUDGET_NODES")]
    budget_nodes: Option<usize>,
    /// Largest number of simplices per order complex.
    #[arg(long, env = "RACKLAB_BUDGET_SIMPLICES")]
    budget_simplices: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Order, conjugacy classes, centre and solvability data of a group.
    Group {
        spec: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Statistics of the subrack lattice of a rack.
    Lattice {
        spec: String,
        /// Write the lattice in the text exchange format.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Reduced integral homology of the order complex of the subrack lattice.
    Homology {
        spec: String,
        /// Reduce the full complex without free-face collapses.
        #[arg(long)]
        no_collapse: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Run verification checks.
    Verify {
        /// Run every check.
        #[arg(long)]
        all: bool,
        /// Run one check; may be repeated.
        #[arg(long = "check", value_name = "ID")]
        checks: Vec<String>,
        /// List the available check ids and exit.
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Number of checks run at once.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include wall-clock runtimes in the report.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        limits: Limits,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Group { spec, limits } => commands::group(&spec, &limits)?,
        Command::Lattice { spec, export, limits } => commands::lattice(&spec, export.as_deref(), &limits)?,
        Command::Homology { spec, no_collapse, limits } => commands::homology(&spec, !no_collapse, &limits)?,
        Command::Verify { all, checks, list, format, jobs, timings, limits } => {
            if list {
                let list: String = verify::CHECKS.iter().map(|c| format!("{}\t{}\n", c.id, c.anchor)).collect();
                commands::write_stdout(&list)?;
                return Ok(ExitCode::SUCCESS);
            }
            let selected = verify::select(all, &checks)?;
            let report = verify::run(&selected, &limits.into(), jobs, timings);
            let out = match format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => verify::to_csv(&report, timings)?,
            };
            commands::write_stdout(&out)?;
            return Ok(if report.summary.failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}
