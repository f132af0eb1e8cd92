use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "smhd",
    version,
    about = "Shallow-water MHD fronts: classification, shocks, stability, sweeps, simulation"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Input JSON file.
    #[arg(long, global = true, value_parser = clap::builder::ValueParser::os_string())]
    pub input: Option<OsString>,
    /// Output directory; created if missing.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Relative zero threshold.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Gravitational acceleration; overrides the value in the input.
    #[arg(long, global = true)]
    pub g: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the discontinuity between two states.
    Classify,
    /// Build a stationary rectilinear shock and its linearization.
    Shock(ShockArgs),
    /// Stability verdicts for a current-vortex sheet or a rectilinear shock.
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Evaluate a verdict over a two-parameter grid.
    Sweep,
    /// Run a simulation from a configuration file.
    Simulate,
}

#[derive(Debug, Clone, Args, Default)]
pub struct ShockArgs {
    #[arg(long)]
    pub h_minus: Option<f64>,
    /// Height ratio `h+ / h-`.
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub b1_plus: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum StabilityCommand {
    /// Current-vortex sheet: symmetrizer choice and both verdicts.
    Cvs {
        /// Margin for the sufficient condition.
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
    },
    /// Rectilinear shock: Lax verdict and Froude window.
    Shock(ShockArgs),
}
