use std::process::ExitCode;

use clap::Parser;
use isoflow_lab::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
