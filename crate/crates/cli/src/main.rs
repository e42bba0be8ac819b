//! `isg`: engrave, probe and sweep interlaced spin gratings from the command
//! line. See `isg --help` and the guide's configuration chapter.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod error;
mod output;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("isg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
