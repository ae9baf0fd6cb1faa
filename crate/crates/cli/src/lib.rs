//! Command-line front end: argument parsing, command dispatch and output.

pub mod cache;
mod commands;
pub mod error;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use propg_core::ncseries::DEFAULT_BUDGET;
use propg_core::Exec;

pub use cache::Cache;
pub use error::{exit, CliError, CliResult};
pub use report::{Format, Report, SCHEMA};

#[derive(Debug, Parser)]
#[command(
    name = "propg",
    version,
    about = "Truncated pro-p group and Bernoulli experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Evaluate batches on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Args, Clone)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Digits of p-adic precision reported.
    #[arg(long, default_value_t = 6)]
    pub precision: u32,
    /// Nilpotency class of the truncation.
    #[arg(long, default_value_t = 3)]
    pub class: usize,
    #[arg(long, default_value_t = 2)]
    pub generators: usize,
    /// δ acts on generator k by the character power t_k (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub delta_twists: Vec<i64>,
    /// γ acts on generator k by the character power s_k (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gamma_twists: Vec<i64>,
    /// Maximum number of stored coefficients per element.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Inspect,
    Clear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irregular pairs (p, m) with p <= pmax.
    Irregular {
        #[arg(long, default_value_t = 700)]
        pmax: u64,
        /// Neither read nor write the Bernoulli cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Upper bounds for v_p(N_m) over odd m.
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        m_min: u64,
        /// Defaults to 4p.
        #[arg(long)]
        m_max: Option<u64>,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        vandiver: bool,
    },
    /// Graded ranks of the free Lie algebra on s_3, s_5, ...
    LieDims {
        #[arg(long, default_value_t = 24)]
        max_degree: u32,
    },
    /// Lyndon basis words by degree.
    LieBasis {
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long)]
        no_cache: bool,
    },
    /// Independence of [s3, s9] and [s5, s7] in degree 12.
    Rank12 {
        #[arg(long, default_value_t = 691)]
        p: u64,
    },
    /// Iterate the eigenspace operator on random elements and record depths.
    EpsilonDemo {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
    /// The sigma_k, sigma_{k+p-1}, ... recursion from a random projected seed.
    SigmaTower {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value_t = 3)]
        k: i64,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        /// Fixed number of projections per stage instead of the stable limit.
        #[arg(long)]
        applications: Option<usize>,
    },
    /// Closed-form and simulated valuation of kappa_m(sigma_m).
    SigmaValuation {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        j: u64,
        #[arg(long, default_value_t = 0)]
        v0: u32,
        /// Defaults to the minimum the check needs.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, default_value_t = 1)]
        unit: u64,
    },
    /// Derived generator towers x_{i,j} and their freeness checks.
    Freegp {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        precision: u32,
        #[arg(long, default_value_t = 4)]
        class: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Bernoulli divisibility forced by a first failure of generation in degree m.
    Ihgen {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        vandiver: bool,
    },
    /// Inspect or clear the on-disk cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

impl Cli {
    pub fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

/// Runs the command and returns its report.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let mut report = commands::dispatch(cli)?;
    report
        .meta("schema", SCHEMA)
        .meta("seed", cli.seed)
        .meta("version", env!("CARGO_PKG_VERSION"))
        .meta(
            "exec",
            if cli.exec().is_parallel() {
                "parallel"
            } else {
                "sequential"
            },
        );
    Ok(report)
}

/// Runs the command and writes the rendered report to `--out` or `stdout`.
pub fn run_and_emit(cli: &Cli) -> CliResult<()> {
    let report = run(cli)?;
    let text = report.render(cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Error text for standard error, JSON when the report format is JSON.
pub fn render_error(err: &CliError, format: Format) -> String {
    match format {
        Format::Json => {
            let v = serde_json::json!({
                "schema": SCHEMA,
                "error": { "kind": err.kind(), "exit_code": err.exit_code().to_string(), "message": err.to_string() },
            });
            format!("{v}\n")
        }
        _ => format!("error[{}]: {err}\n", err.kind()),
    }
}
