// SPDX-License-Identifier: MIT OR Apache-2.0

#![forbid(unsafe_code)]

mod args;
mod cache;
mod commands;
mod exit;
mod input;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
