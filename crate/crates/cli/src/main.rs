use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use idemfact_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli.command);
    for m in &report.messages {
        eprintln!("idemfact: {m}");
    }
    let json = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, json + "\n") {
                eprintln!("idemfact: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            // A closed pipe is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
    }
    ExitCode::from(u8::from(report.status))
}
