//! Command-line front end: the `laxkit` binary and its acceptance suite.

pub mod checks;
pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod values;

use cli::{Cli, Command};
use commands::Common;
use error::CliError;
use output::Artifacts;

/// Runs one parsed invocation and returns its report files.
pub fn run(cli: &Cli) -> Result<Artifacts, CliError> {
    let common = Common { seed: cli.seed, bindings: values::parse_bindings(&cli.bind)? };
    match &cli.command {
        Command::Painleve(a) => commands::painleve(a, &common),
        Command::Flow(a) => commands::flow(a, &common),
        Command::Jacobi(a) => commands::jacobi(a, &common),
        Command::Check(a) => commands::check(a, &common),
    }
}
