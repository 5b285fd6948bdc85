use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dressed::commands::{self, DressMode, SweepArgs};
use dressed::config::{Overrides, OutputFormat, RunConfig};
use dressed_core::dressing::Construction;

/// Dressed coherent states in finite dimension.
#[derive(Parser)]
#[command(name = "dressed", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Hilbert space dimension.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// `paper-fi`, `random`, `random:<seed>`, or a JSON file of [re, im] pairs.
    #[arg(long, global = true)]
    fiducial: Option<String>,
    #[arg(long, global = true)]
    tie_tol: Option<f64>,
    /// Allowed absolute deviation from the reference tables.
    #[arg(long, global = true)]
    table_tol: Option<f64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Shapley values, Q-values and the λ sweep, compared with the reference tables.
    Tables,
    /// Dressed density matrices of the coherent family or of a total set.
    Dress {
        /// JSON file `{"dim": d, "vectors": [[[re, im], ...], ...]}`; dresses a total set.
        #[arg(long)]
        total_set: Option<PathBuf>,
        /// Compute every σ(i) by its own subset sum instead of by displacement.
        #[arg(long)]
        direct: bool,
        /// Run the full invariant suite.
        #[arg(long)]
        verify: bool,
    },
    /// Characteristic function, Möbius transform, Shapley values and predicates of a game file.
    Game { file: PathBuf },
    /// Ground state, weights and location indices along θ(λ) = Σ λ^k M_k.
    Sweep {
        /// JSON polynomial `{"dim": d, "terms": [M0, M1, ...]}`; defaults to the built-in Hamiltonian.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        /// `a:b:step` or `x1,x2,...`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// λ of the reference ground state; defaults to the first grid point.
        #[arg(long, allow_hyphen_values = true)]
        reference: Option<f64>,
        /// Number of leading entries compared for comonotonicity intervals.
        #[arg(long, value_delimiter = ',')]
        top: Vec<usize>,
    },
    /// The coherent states, their genericity, and optionally the weights of an operator.
    States {
        /// Operator as CSV of `re+imi` entries or JSON rows of [re, im].
        #[arg(long)]
        operator: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, commands::CommandError> {
    let g = cli.global;
    let overrides = Overrides {
        d: g.d,
        fiducial: g.fiducial,
        tie_tol: g.tie_tol,
        table_tol: g.table_tol,
        format: g.format,
        out_dir: g.out_dir,
    };
    let cfg = RunConfig::load(g.config.as_deref(), &overrides)?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Tables => commands::cmd_tables(&cfg, &mut out),
        Command::Dress {
            total_set,
            direct,
            verify,
        } => {
            let mode = match total_set {
                Some(p) => DressMode::TotalSet(p),
                None => DressMode::Coherent {
                    construction: if direct { Construction::Direct } else { Construction::Covariance },
                    verify,
                },
            };
            commands::cmd_dress(&cfg, &mode, &mut out)
        }
        Command::Game { file } => commands::cmd_game(&cfg, &file, &mut out),
        Command::Sweep {
            hamiltonian,
            grid,
            reference,
            top,
        } => commands::cmd_sweep(
            &cfg,
            &SweepArgs {
                hamiltonian,
                grid,
                reference,
                top,
            },
            &mut out,
        ),
        Command::States { operator } => commands::cmd_states(&cfg, operator.as_deref(), &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
