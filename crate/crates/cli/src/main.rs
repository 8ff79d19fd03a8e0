//! `spinloop` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use spinloop::integrator::{Branch, IntegratorConfig};
use spinloop::FieldParams;

mod commands;

#[derive(Parser)]
#[command(name = "spinloop", version, about = "Driven spin-1/2 on a planar field loop")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one period; write the trajectory CSV and field/polarization plots.
    #[command(allow_negative_numbers = true)]
    Trace(TraceArgs),
    /// Sweep Δ at fixed ω₀/ω; write the sweep CSV and optionally its plot.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Compare the integrator against the static, rotating-frame and Landau-Zener oracles.
    OracleCheck(OracleArgs),
    /// Step-doubling ladder; checks the observed order and final phase error.
    #[command(allow_negative_numbers = true)]
    Convergence(ConvergenceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    #[value(name = "+1", alias = "1", alias = "plus")]
    Plus,
    #[value(name = "-1", alias = "minus")]
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

/// Field parameters, either as `ω₀/ω` plus `Δ` (with `ω = 1`) or as
/// absolute frequencies.
#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Loop radius over drive frequency, ω₀/ω.
    #[arg(long, conflicts_with_all = ["omega0", "omega1", "omega", "static_field"])]
    omega0_over_omega: Option<f64>,
    /// Detuning Δ = (ω₁ - ω₀)/ω₀.
    #[arg(long, conflicts_with_all = ["omega0", "omega1", "omega", "static_field"])]
    delta: Option<f64>,
    /// Drive frequency ω (absolute mode, default 1).
    #[arg(long)]
    omega: Option<f64>,
    /// Loop radius ω₀ (absolute mode).
    #[arg(long, conflicts_with = "static_field")]
    omega0: Option<f64>,
    /// Loop centre ω₁ (absolute mode).
    #[arg(long)]
    omega1: Option<f64>,
    /// Constant field along x: ω₀ = 0, requires --omega1.
    #[arg(long = "static", requires = "omega1")]
    static_field: bool,
}

impl FieldArgs {
    fn resolve(&self, default_ratio: f64, default_delta: f64) -> Result<FieldParams, Failure> {
        let params = if self.static_field {
            FieldParams::static_field(self.omega.unwrap_or(1.0), self.omega1.unwrap_or_default())
        } else if self.omega0.is_some() || self.omega1.is_some() || self.omega.is_some() {
            match (self.omega0, self.omega1) {
                (Some(w0), Some(w1)) => FieldParams::new(self.omega.unwrap_or(1.0), w0, w1),
                _ => return Err(Failure::Usage("absolute mode needs both --omega0 and --omega1".into())),
            }
        } else {
            FieldParams::from_ratio(
                self.omega0_over_omega.unwrap_or(default_ratio),
                self.delta.unwrap_or(default_delta),
            )
        };
        params.map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Starting eigenstate branch.
    #[arg(long, value_enum, default_value = "+1")]
    branch: BranchArg,
    /// Fixed steps per period (default scales with ω₀/ω).
    #[arg(long)]
    steps_per_period: Option<usize>,
    /// Record every n-th step.
    #[arg(long, default_value_t = 100)]
    stride: usize,
    #[arg(long, default_value = "trace.csv")]
    csv: PathBuf,
    #[arg(long, default_value = "field_path.svg")]
    field_plot: PathBuf,
    #[arg(long, default_value = "polarization.svg")]
    polarization_plot: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1000.0)]
    omega0_over_omega: f64,
    #[arg(long, default_value_t = -0.05)]
    delta_min: f64,
    #[arg(long, default_value_t = 0.05)]
    delta_max: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long, value_enum, default_value = "+1")]
    branch: BranchArg,
    #[arg(long)]
    steps_per_period: Option<usize>,
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    /// Also write the P and γ_B vs Δ plot here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Static,
    Rotating,
    Lz,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Run a single check.
    #[arg(long, value_enum)]
    only: Option<OracleKind>,
    /// Override the step count of every check.
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long, default_value_t = spinloop::validation::DEFAULT_DRAWS)]
    draws: usize,
    #[arg(long, default_value_t = spinloop::validation::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value = "+1")]
    branch: BranchArg,
    /// Step count of the first rung.
    #[arg(long, default_value_t = 2000)]
    base: usize,
    /// Number of rungs; each doubles the step count.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Required final phase error in radians.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<spinloop::Error> for Failure {
    fn from(e: spinloop::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

pub fn config_for(
    params: &FieldParams,
    steps: Option<usize>,
    stride: Option<usize>,
) -> Result<IntegratorConfig, Failure> {
    let mut config = IntegratorConfig::for_params(params);
    if let Some(n) = steps {
        config = config.with_steps(n);
    }
    config = config.with_stride(stride.unwrap_or(config.steps_per_period));
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::Trace(_) => "trace",
        Command::Sweep(_) => "sweep",
        Command::OracleCheck(_) => "oracle-check",
        Command::Convergence(_) => "convergence",
    };
    let outcome = match cli.command {
        Command::Trace(args) => commands::trace(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::OracleCheck(args) => commands::oracle_check(&args),
        Command::Convergence(args) => commands::convergence(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            let mut root = Cli::command();
            let sub = root.find_subcommand_mut(name).expect("known subcommand");
            sub.error(ErrorKind::ValueValidation, msg).exit()
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
