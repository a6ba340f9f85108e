//! `drivenrev`: predict and measure wave-packet revival time scales in
//! periodically driven one-dimensional level ladders.
//!
//! Exit codes: 0 success, 2 domain/parameter guard, 3 integration
//! accuracy, 4 analysis input error.

// Float guards are written `!(a >= b)` on purpose: the negation rejects NaN
// along with the out-of-range values, which `a < b` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use driven_revivals::error::Error;
use driven_revivals::quasienergy::{ModeSelect, QConvention};

mod commands;
mod config;
mod out;
mod svg;

use commands::{GlobalOpts, SweepParam};
use config::RunConfig;

/// CLI-level failure: either a library error or a trace-file parse error.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    TraceParse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            CliError::TraceParse(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::TraceParse(msg) => write!(f, "trace parse error: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Core(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Definition,
    Paper,
    Both,
}

impl From<ModeArg> for ModeSelect {
    fn from(m: ModeArg) -> ModeSelect {
        match m {
            ModeArg::Definition => ModeSelect::Definition,
            ModeArg::Paper => ModeSelect::Paper,
            ModeArg::Both => ModeSelect::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Paperq,
    Stdq,
}

impl From<ConventionArg> for QConvention {
    fn from(c: ConventionArg) -> QConvention {
        match c {
            ConventionArg::Paperq => QConvention::PaperQ,
            ConventionArg::Stdq => QConvention::StandardQ,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParamArg {
    Lambda,
    HbarEff,
    DeltaN,
}

impl From<SweepParamArg> for SweepParam {
    fn from(p: SweepParamArg) -> SweepParam {
        match p {
            SweepParamArg::Lambda => SweepParam::Lambda,
            SweepParamArg::HbarEff => SweepParam::HbarEff,
            SweepParamArg::DeltaN => SweepParam::DeltaN,
        }
    }
}

#[derive(Parser)]
#[command(name = "drivenrev", version, about)]
struct Cli {
    /// JSON run configuration (strict schema; unknown keys rejected).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Also emit an SVG plot where the command supports it.
    #[arg(long, global = true)]
    svg: bool,

    /// Which time-scale computation(s) to run.
    #[arg(long, global = true, value_enum, default_value = "both")]
    mode: ModeArg,

    /// Mathieu parameter identification.
    #[arg(long, global = true, value_enum, default_value = "paperq")]
    convention: ConventionArg,

    /// Apply the angle-substitution Jacobian to the Mathieu identification
    /// (definition-mode sensitivity variant).
    #[arg(long, global = true)]
    strict_jacobian: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Predict T_cl, T_rev, T_sr from the configured spectrum and drive.
    Times,
    /// Tabulate Mathieu characteristic values over an order grid.
    Mathieu {
        /// Drive parameter q.
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.1)]
        nu_min: f64,
        #[arg(long, default_value_t = 4.0)]
        nu_max: f64,
        /// Number of grid points (endpoints included).
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
    /// Integrate the driven Schrödinger equation and write the
    /// autocorrelation trace.
    Evolve {
        /// Replace the drive by its resonant ladder terms (exact reduced
        /// model) instead of full integration.
        #[arg(long)]
        rwa: bool,
    },
    /// Measure revival time scales from a trace CSV, comparing against
    /// predictions when the config carries the physics sections.
    Analyze {
        /// Trace CSV produced by `evolve` (columns t,re_A,im_A,abs_A2,norm_drift).
        #[arg(long)]
        trace: PathBuf,
    },
    /// Recompute predictions over a parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParamArg,
        /// Comma-separated grid values.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
    },
    /// Run the oracle ledger and write it as CSV.
    Selfcheck {
        /// Sensitivity hook: scale the closed-form derivative chain by this
        /// factor (any value other than 1 must fail the derivative oracles).
        #[arg(long, default_value_t = 1.0, hide = true)]
        mutate_beta: f64,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Err(CliError::Core(Error::Domain(
            "this command needs --config <path>".into(),
        ))),
    }
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let opts = GlobalOpts {
        out_dir: cli.out.clone(),
        svg: cli.svg,
        mode: cli.mode.into(),
        convention: cli.convention.into(),
        strict_jacobian: cli.strict_jacobian,
    };
    match &cli.cmd {
        Cmd::Times => commands::cmd_times(&load_config(cli)?, &opts),
        Cmd::Mathieu { q, nu_min, nu_max, steps } => {
            commands::cmd_mathieu(*q, *nu_min, *nu_max, *steps, &opts)
        }
        Cmd::Evolve { rwa } => commands::cmd_evolve(&load_config(cli)?, *rwa, &opts),
        Cmd::Analyze { trace } => {
            // Analysis runs with defaults when no config is given.
            let config = match &cli.config {
                Some(path) => RunConfig::load(path)?,
                None => RunConfig::default(),
            };
            commands::cmd_analyze(trace, &config, &opts)
        }
        Cmd::Sweep { param, grid } => {
            commands::cmd_sweep(&load_config(cli)?, (*param).into(), grid, &opts)
        }
        Cmd::Selfcheck { mutate_beta } => commands::cmd_selfcheck(*mutate_beta, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
