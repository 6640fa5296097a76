use std::process::ExitCode;

use clap::Parser;
use indiff::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
