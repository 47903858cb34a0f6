mod args;
mod commands;
mod output;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use commands::{Outcome, Status};
use std::io::Write;
use std::process::ExitCode;

const USAGE: u8 = 64;
const DOMAIN: u8 = 65;
const IO: u8 = 74;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    let format = cli.output.format;
    let outcome = match &cli.command {
        Command::Eval(a) => Ok(commands::eval(a, format)),
        Command::Spectrum(a) => commands::spectrum(a, format),
        Command::Density(a) => commands::density(a, format),
        Command::Phase(a) => commands::phase(a, format),
        Command::Verify(a) => Ok(commands::verify(a, format)),
    };
    let Outcome { doc, status } = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(DOMAIN);
        }
    };
    let bytes = output::render(&doc, format);
    let written = match &cli.output.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(IO);
    }
    match status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Failed => ExitCode::from(1),
        Status::Partial => ExitCode::from(2),
    }
}
