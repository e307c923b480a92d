use std::process::ExitCode;

use clap::Parser;
use pvakit::cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = render(&cli, &report);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{out}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
