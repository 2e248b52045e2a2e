mod args;
mod decompose;
mod report;
mod scenario;
mod simulate;
mod verify;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qmeasure::ErrorClass;

use args::{Cli, Command, ScenarioCommand};
use report::RunReport;

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_NOT_DECOMPOSABLE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Clone)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VALIDATION, message: message.into() }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        Self::validation(format!("{}: {e}", path.display()))
    }

    pub fn class_name(&self) -> &'static str {
        match self.code {
            EXIT_NOT_DECOMPOSABLE => "not_decomposable",
            EXIT_NUMERICAL => "numerical_guard",
            _ => "validation",
        }
    }
}

impl From<qmeasure::Error> for CliError {
    fn from(e: qmeasure::Error) -> Self {
        let code = match e.class() {
            ErrorClass::Validation => EXIT_VALIDATION,
            ErrorClass::NotDecomposable => EXIT_NOT_DECOMPOSABLE,
            ErrorClass::NumericalGuard => EXIT_NUMERICAL,
        };
        CliError { code, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Runs a command body; on failure the partial report is still emitted with
/// an error block.
fn finish(
    mut report: RunReport,
    out: Option<&Path>,
    body: impl FnOnce(&mut RunReport) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match body(&mut report) {
        Ok(()) => report.emit(out),
        Err(e) => {
            report.fail(&e);
            report.emit(out)?;
            Err(e)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose(a) => finish(RunReport::new("decompose"), a.out.as_deref(), |r| decompose::run(&a, r)),
        Command::Verify(a) => finish(RunReport::new("verify"), a.out.as_deref(), |r| verify::run(&a, r)),
        Command::Simulate(a) => finish(RunReport::new("simulate"), a.out.as_deref(), |r| simulate::run(&a, r)),
        Command::Scenario(ScenarioCommand::TwoPeak(a)) => {
            finish(RunReport::new("scenario two-peak"), a.out.as_deref(), |r| scenario::two_peak(&a, r))
        }
        Command::Scenario(ScenarioCommand::Repeated(a)) => {
            finish(RunReport::new("scenario repeated"), a.out.as_deref(), |r| scenario::repeated(&a, r))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
