mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cycle_scope::Error;

/// Series, branch points and resummation of the van der Pol limit cycle.
#[derive(Debug, Parser)]
#[command(name = "cycle-scope", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate frequency, amplitude and period coefficient files.
    Series(SeriesArgs),
    /// Locate the nearest branch-point pair of a coefficient file.
    Branch(BranchArgs),
    /// Resummed period and amplitude at one or more values of mu.
    Resum(ResumArgs),
    /// Reference period and amplitude by high-precision shooting.
    Oracle(OracleArgs),
    /// Series, resummation and oracle side by side, with an optional gamma sweep.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Highest power of mu.
    #[arg(long)]
    order: usize,
    /// Floating-point working digits; with --exact as well, both are run and compared.
    #[arg(long)]
    digits: Option<u32>,
    /// Exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BranchArgs {
    /// Coefficient file (series in mu or nu).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 20)]
    kmin: usize,
    #[arg(long, default_value_t = 50)]
    kmax: usize,
    #[arg(long, default_value_t = 10)]
    kstep: usize,
    /// Digits used to read the file; defaults to its own precision.
    #[arg(long)]
    digits: Option<u32>,
    /// Absolute root-persistence tolerance in nu.
    #[arg(long, default_value_t = cycle_scope::shafer::DEFAULT_PERSISTENCE_TOL)]
    tol: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "where", required = true, multiple = false)]
struct MuChoice {
    #[arg(long, group = "where")]
    mu: Option<String>,
    /// `start:stop:count`.
    #[arg(long = "mu-grid", group = "where")]
    mu_grid: Option<String>,
}

#[derive(Debug, Args)]
struct ResumArgs {
    /// Series directory, or one coefficient file whose siblings supply the other quantity.
    #[arg(long = "in")]
    input: PathBuf,
    /// Branch-point file written by `branch`.
    #[arg(long)]
    branch: PathBuf,
    #[command(flatten)]
    mu: MuChoice,
    /// Period Pade degree M (`[M, M+1]`); the amplitude uses `[M, M+2]`.
    #[arg(long, default_value_t = cycle_scope::resum::DEFAULT_PADE_DEGREE)]
    pade: usize,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Extra key=value settings (c_T, beta, gamma, ...).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also run the oracle and fill rel_err_vs_oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long = "oracle-digits", default_value_t = 40)]
    oracle_digits: u32,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    mu: MuChoice,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Directory written by `series`.
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    branch: PathBuf,
    #[arg(long = "mu-grid")]
    mu_grid: String,
    /// `start:stop:count` grid of gamma, run at the largest mu with an oracle value.
    #[arg(long = "gamma-sweep", allow_hyphen_values = true)]
    gamma_sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, default_value_t = cycle_scope::resum::DEFAULT_PADE_DEGREE)]
    pade: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "oracle-digits", default_value_t = 40)]
    oracle_digits: u32,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 4,
        e if e.is_precondition() => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Series(a) => commands::series(a),
        Command::Branch(a) => commands::branch(a),
        Command::Resum(a) => commands::resum(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
