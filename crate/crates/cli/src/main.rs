//! `cwb`: command-line workbench over `cwb-core`.
//!
//! Every command prints one JSON document (or CSV where noted) and exits
//! with 0 on pass, 1 on a property failure or negative answer, 2 on usage
//! or malformed input, and 3 when an enumeration budget is exceeded.

mod args;
mod cond;
mod creature;
mod gen;
mod io;
mod qhn;
mod suite;

use args::{Cli, Cmd, Mode};
use clap::Parser;
use io::{CliError, Outcome};
use std::process::ExitCode;

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Creature { verb } => creature::run(g, verb),
        Cmd::Cond { verb } => cond::run(g, verb),
        Cmd::Qhn { verb } => qhn::run(g, verb),
        Cmd::Suite { verb } => suite::run(g, verb),
        Cmd::Gen(a) => gen::run(g, a),
        Cmd::Amalgamate(a) => match a.mode {
            Mode::QInfty => cond::amalgamate(g, &a.files, &a.slack),
            Mode::Qhn => qhn::amalgamate(g, &a.files),
        },
        Cmd::Measure { file } => qhn::measure(g, file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli).and_then(|out| io::emit(&cli.global, &out).map(|()| out.status)) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
