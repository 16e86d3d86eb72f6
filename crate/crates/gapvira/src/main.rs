//! Binary entry point for the `gapvira` command line.

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gapvira::cli::run(std::env::args_os()))
}
