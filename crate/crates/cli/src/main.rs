mod cli;
mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};

/// Why a command stopped before producing a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable input, invalid parameters or I/O trouble.
    Usage(String),
    /// Non-convergence, ill-conditioning or a broken symmetry check.
    Numerical(String),
}

impl From<foel_core::Error> for Failure {
    fn from(e: foel_core::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Foel(a) => commands::foel(a),
        Command::TlMatrix(a) => commands::tl_matrix(a),
        Command::FkBasis(a) => commands::fk_basis(a),
        Command::Qfoel(a) => commands::qfoel(a),
        Command::Droplet(a) => commands::droplet(a),
        Command::SsepGap(a) => commands::ssep_gap(a),
        Command::Spinmap(a) => commands::spinmap(a),
        Command::Figure1(a) => commands::figure1(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
