mod args;
mod commands;
mod format;

use args::{Cli, Command, Output};
use clap::Parser;
use std::fmt;
use std::io::Write;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Verification,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Verification => write!(f, "verification failed"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verification => 4,
        }
    }
}

impl From<alpha_paltanea::Error> for CliError {
    fn from(e: alpha_paltanea::Error) -> Self {
        use alpha_paltanea::Error as E;
        let numeric = e.is_non_convergence() || matches!(e, E::DegenerateFit { .. });
        if numeric {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

fn emit(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(a) => emit(&a.output, &commands::eval(&a)?),
        Command::Table(a) => emit(&a.output, &commands::table(&a)?),
        Command::Convergence(a) => {
            let (body, summary) = commands::convergence(&a)?;
            emit(&a.output, &body)?;
            eprint!("{summary}");
            Ok(())
        }
        Command::Verify(a) => {
            let (report, ok) = commands::verify(&a)?;
            emit(&a.output, &report)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
