mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgfint_core::lie::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "kgfint", version, about = "Cohomology, symmetry operators and reductions for KGF equations on Lie groups")]
struct Cli {
    /// Directory for JSON reports and CSV trajectories.
    #[arg(long, global = true, env = "KGFINT_OUT_DIR", default_value = "kgfint-out")]
    out_dir: PathBuf,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run every data-parallel stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check antisymmetry and the Jacobi identity of an algebra file.
    Validate { file: PathBuf },
    /// Dimensions of Z², B² and H².
    Cohomology { file: PathBuf },
    /// Cohomological index of a cocycle class and the integrability verdict.
    Index {
        file: PathBuf,
        #[command(flatten)]
        cocycle: CocycleArgs,
        /// The metric is an arbitrary invariant metric.
        #[arg(long)]
        metric_arbitrary: bool,
    },
    /// Central extension by a cocycle.
    Extend {
        file: PathBuf,
        #[command(flatten)]
        cocycle: CocycleArgs,
    },
    /// Exact identity suites and D-function checks for E(2)xR.
    VerifyExample {
        #[command(flatten)]
        params: ParamArgs,
        /// Also load and check a model bundle against the built-in frames.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Reduced equation in q and its confluent Heun form.
    Reduce {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Series-seeded integration of the Heun equation with residuals.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Reduce and solve over a grid of charges and metric parameters.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Comma-separated charges.
        #[arg(long, default_value = "1/2,1,2")]
        eps_values: String,
        /// Comma-separated metric parameters.
        #[arg(long, default_value = "2,3")]
        vareps_values: String,
    },
}

#[derive(Debug, Args)]
pub struct CocycleArgs {
    /// Cocycle file with 1-based entries.
    #[arg(long, conflicts_with = "mu")]
    pub cocycle: Option<PathBuf>,
    /// Coefficients of e1^e2, e3^e4, e1^e3, e2^e3 (four-dimensional algebras).
    #[arg(long)]
    pub mu: Option<String>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Charge.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub eps: String,
    /// Metric parameter, must exceed 1.
    #[arg(long, default_value = "2")]
    pub vareps: String,
    #[arg(long = "J1", default_value = "1", allow_hyphen_values = true)]
    pub j1: String,
    /// Decimal or p/q.
    #[arg(long = "J2", default_value = "0.5", allow_hyphen_values = true)]
    pub j2: String,
    #[arg(long, default_value = "1")]
    pub m: String,
    #[arg(long, default_value = "1,0,0,0", allow_hyphen_values = true)]
    pub mu: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 0.1)]
    pub z0: f64,
    #[arg(long, default_value_t = 0.9)]
    pub z1: f64,
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Frobenius exponent of the seeding branch, 0 or 1/2.
    #[arg(long, default_value = "0")]
    pub branch: String,
    #[arg(long, default_value_t = 80)]
    pub nodes: usize,
    /// Largest acceptable residual along the trajectory.
    #[arg(long, default_value_t = 1e-8)]
    pub max_residual: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("check failed: {0}")]
    Math(String),
    #[error("uncertified: {0}")]
    Uncertified(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Uncertified(_) => 3,
        }
    }
}

pub struct Context {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub format: Format,
    pub exec: kgfint_core::Execution,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        out_dir: cli.out_dir,
        seed: cli.seed,
        format: cli.format,
        exec: if cli.sequential {
            kgfint_core::Execution::Sequential
        } else {
            kgfint_core::Execution::Parallel
        },
    };
    let res = match &cli.cmd {
        Command::Validate { file } => commands::validate(&ctx, file),
        Command::Cohomology { file } => commands::cohomology(&ctx, file),
        Command::Index {
            file,
            cocycle,
            metric_arbitrary,
        } => commands::index(&ctx, file, cocycle, *metric_arbitrary),
        Command::Extend { file, cocycle } => commands::extend(&ctx, file, cocycle),
        Command::VerifyExample {
            params,
            model,
            points,
            tol,
        } => commands::verify_example(&ctx, params, model.as_deref(), *points, *tol),
        Command::Reduce { params } => commands::reduce(&ctx, params),
        Command::Solve { params, solve } => commands::solve(&ctx, params, solve),
        Command::Sweep {
            params,
            solve,
            eps_values,
            vareps_values,
        } => commands::sweep(&ctx, params, solve, eps_values, vareps_values),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kgfint: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
