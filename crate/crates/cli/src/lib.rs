//! Command-line front end: classification, shock construction, stability
//! verdicts, parameter sweeps and simulation runs.

pub mod args;
pub mod commands;
pub mod error;
pub mod svg;
pub mod sweep;

use std::io::Write;

pub use args::{Cli, Command, Format, GlobalOpts, StabilityCommand};
pub use error::{CliError, Result};

/// Runs one parsed invocation and returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let o = &cli.global;
    match &cli.command {
        Command::Classify => commands::classify(o, stdout, stderr),
        Command::Shock(a) => commands::shock(o, a, stdout, stderr),
        Command::Stability(StabilityCommand::Cvs { epsilon }) => commands::stability_cvs(o, *epsilon, stdout, stderr),
        Command::Stability(StabilityCommand::Shock(a)) => commands::stability_shock(o, a, stdout, stderr),
        Command::Sweep => commands::sweep_cmd(o, stdout, stderr),
        Command::Simulate => commands::simulate_cmd(o, stdout, stderr),
    }
}
