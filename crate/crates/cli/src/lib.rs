//! Command-line driver: channel files in, verdicts, error tables and CSV out.

pub mod args;
pub mod commands;
pub mod error;
pub mod files;

use std::io::Write;

pub use args::{Cli, Command};
pub use error::CliError;
pub use files::{ChannelFile, DmcFile};

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Degrade(a) => commands::degrade(a, out),
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Exact(a) => commands::exact(a, out),
        Command::Export(a) => commands::export(a, out),
    }
}
