mod commands;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub const THREADS_ENV: &str = "TILTING_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tilting_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "tilting",
    version,
    about = "Tensor powers of T(1) for quantum sl2 at odd roots of unity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct LevelArg {
    /// Odd order of the root of unity, at least 3.
    #[arg(long, allow_negative_numbers = true)]
    pub l: i64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SizeArgs {
    #[command(flatten)]
    pub level: LevelArg,
    /// Tensor power.
    #[arg(long = "N", visible_alias = "n", allow_negative_numbers = true)]
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Big,
    Small,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicity tables of T(1)^N.
    Mult {
        #[command(subcommand)]
        group: MultCommand,
    },
    /// Restriction of the big tilting module T(k) to the small quantum group.
    Restrict {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long)]
        k: usize,
    },
    /// Probability measures on the summands of T(1)^N.
    Measure {
        #[arg(value_enum)]
        kind: MeasureKind,
        #[command(flatten)]
        size: SizeArgs,
        /// Temperature of the character measure.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
    },
    /// Weighted lattice path counts.
    Paths {
        #[command(subcommand)]
        command: PathsCommand,
    },
    /// Multiplicity recovered by quadrature against the dual basis.
    Integral {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        k: usize,
        /// Number of quadrature nodes; defaults to the smallest exact size.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Markov chains induced by tensoring with T(1).
    Markov {
        #[command(subcommand)]
        command: MarkovCommand,
    },
    /// Asymptotic formulas and convergence to limit laws.
    Asym {
        #[command(subcommand)]
        command: AsymCommand,
    },
    /// Run the cross-formula consistency suites.
    Selftest {
        /// Smaller sizes for a fast check.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MultCommand {
    /// Big quantum group: multiplicities of T(k).
    Big(SizeArgs),
    /// Small quantum group: multiplicities at each node.
    Small(SizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    /// Character measure at temperature t.
    Char,
    /// Big-group Plancherel measure.
    Planch,
    /// Small-group Plancherel measure.
    SmallPlanch,
    /// Quantum Plancherel measure.
    Qplanch,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub size: SizeArgs,
    /// Lattice to walk on.
    #[arg(long, value_enum, default_value_t = Group::Big)]
    pub group: Group,
    #[arg(long, default_value_t = 0)]
    pub start: usize,
}

#[derive(Debug, Subcommand)]
pub enum PathsCommand {
    /// Weighted number of N-step paths between two nodes.
    Count {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        end: usize,
    },
    /// Path counts to every node after 0..=N steps.
    Table(PathArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// big-character, big-plancherel, small-plancherel or small-quantum.
    #[arg(long)]
    pub model: String,
    #[command(flatten)]
    pub level: LevelArg,
    /// Temperature of the big-character model.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Big models: number of lattice nodes to keep.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum MarkovCommand {
    /// Transition probabilities.
    Kernel(ModelArgs),
    /// Distribution after N steps from node 0.
    Iterate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "N", visible_alias = "n", allow_negative_numbers = true)]
        n: i64,
    },
    /// Stationary distribution by power iteration.
    Stationary(ModelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeKind {
    Bulk,
    Plancherel,
    Intermediate,
    Poisson,
}

#[derive(Debug, Subcommand)]
pub enum AsymCommand {
    /// Distance between binned exact measures and the limit law.
    Report {
        #[arg(long, value_enum)]
        regime: RegimeKind,
        #[command(flatten)]
        level: LevelArg,
        /// Comma-separated tensor powers.
        #[arg(
            long = "N",
            visible_alias = "n",
            value_delimiter = ',',
            required = true
        )]
        n: Vec<usize>,
        /// Bulk regime temperature.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        /// Intermediate regime scaled temperature.
        #[arg(long, allow_negative_numbers = true)]
        u: Option<f64>,
        /// Poisson regime parameter.
        #[arg(long)]
        theta: Option<f64>,
        /// Drop the runtime column so output is reproducible.
        #[arg(long)]
        omit_timing: bool,
    },
    /// Exact versus asymptotic multiplicity and densities at one point.
    Eval {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        k: usize,
        /// Also evaluate the character density at this temperature.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads()
        .and_then(|()| commands::run(&cli))
        .and_then(|out| {
            emit(&cli, &out.text)?;
            match out.failure {
                Some(msg) => Err(CliError::Verification(msg)),
                None => Ok(()),
            }
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
