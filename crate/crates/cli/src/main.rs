mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Represent(a) => Ok(commands::represent(cli, a)?.render(cli.json)),
        Command::Perturb(a) => Ok(commands::perturb(cli, a)?.render(cli.json)),
        Command::Checks(a) => {
            let report = commands::checks(cli, a)?;
            let failed = commands::failed_checks(&report);
            emit(&report.render(cli.json));
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
            Ok(String::new())
        }
        Command::Gen(g) => {
            let (report, text) = commands::gen(cli, g)?;
            Ok(if cli.json { report.render(true) } else { text })
        }
    }
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.is_empty() && !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
