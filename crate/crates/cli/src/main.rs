//! `gyrolab` — verify gyrogroup structures, decompose coset spaces, and
//! build prenorm metrics from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails (the
//! report is still written), 2 on usage or input errors. Budget and cap
//! exhaustion are flagged in reports and only affect the exit code under
//! `--strict`.

mod args;
mod commands;
mod output;
mod tablefile;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => commands::verify::run(&a),
        Command::GyrTable(a) => commands::structure::gyr_table(&a),
        Command::Subgyro(a) => commands::structure::subgyro(&a),
        Command::Cosets(a) => commands::structure::cosets(&a),
        Command::Quotient(a) => commands::structure::quotient(&a),
        Command::Setcheck(a) => commands::sets::setcheck(&a),
        Command::Chain(a) => commands::sets::chain(&a),
        Command::Prenorm(a) => commands::prenorm::prenorm(&a),
        Command::Metric(a) => commands::prenorm::metric(&a),
        Command::Probe(a) => commands::probe::run(&a),
        Command::Search(a) => commands::search::run(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
