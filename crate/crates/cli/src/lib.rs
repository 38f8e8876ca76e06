//! Command-line front end for the solvers: game inspection, solving,
//! solver comparison, benchmarking and the code-book transform.

mod commands;
pub mod strategy;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pubcfr_core::{Algorithm, Averaging, CfrOptions, GameSpec, Schedule};

/// Exit code of a run whose own threshold check failed.
pub const EXIT_THRESHOLD: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pubcfr_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Parser)]
#[command(name = "pubcfr", version, about = "Vanilla and public-state CFR over factored-observation games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print game sizes and the sequential-Bayesian-game verdict.
    Info {
        #[arg(long, value_parser = parse_game)]
        game: GameSpec,
    },
    /// Check each sequential-Bayesian-game condition and print witnesses.
    CheckSbg {
        #[arg(long, value_parser = parse_game)]
        game: GameSpec,
    },
    /// Run one solver and write its average strategy and run log.
    Solve(SolveArgs),
    /// Run vanilla and public-state CFR side by side and compare them.
    Compare {
        #[arg(long, value_parser = parse_game)]
        game: GameSpec,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        iters: u64,
        /// Iterations between exploitability samples.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        cadence: u64,
    },
    /// Time several solvers and plot convergence against value updates.
    Bench(BenchArgs),
    /// Rewrite a hidden-move matrix game with code books and verify it.
    Transform {
        #[arg(long)]
        game: MatrixId,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        iters: u64,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Iterations between exploitability samples; about 64 samples by default.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub cadence: Option<u64>,
    /// Write 0 in the wall-time column so outputs are reproducible.
    #[arg(long)]
    pub no_wall_time: bool,
    /// Recorded in the output; the solvers themselves are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = AveragingArg::Reach)]
    pub averaging: AveragingArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Alternating)]
    pub schedule: ScheduleArg,
}

impl RunArgs {
    pub fn options(&self) -> CfrOptions {
        CfrOptions {
            averaging: match self.averaging {
                AveragingArg::Reach => Averaging::ReachWeighted,
                AveragingArg::Uniform => Averaging::Uniform,
            },
            schedule: match self.schedule {
                ScheduleArg::Alternating => Schedule::Alternating,
                ScheduleArg::Simultaneous => Schedule::Simultaneous,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = parse_game)]
    pub game: GameSpec,
    #[arg(long, default_value = "vanilla", value_parser = parse_algorithm)]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    #[arg(long)]
    pub strategy_out: Option<PathBuf>,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_game)]
    pub game: GameSpec,
    #[arg(long, default_value = "vanilla,ps", value_delimiter = ',', value_parser = parse_algorithm)]
    pub algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    /// Directory for run.csv, timing.csv, convergence.svg and updates.svg.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AveragingArg {
    Reach,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Alternating,
    Simultaneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixId {
    Mp,
    Rps,
}

fn parse_game(s: &str) -> Result<GameSpec, String> {
    s.parse().map_err(|e: pubcfr_core::Error| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: pubcfr_core::Error| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 on success, 1 on usage or configuration errors, 2
/// when a command's own acceptance threshold is missed.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                1
            };
        }
    };
    match commands::execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
