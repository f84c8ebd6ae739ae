use std::process::ExitCode;

use clap::Parser;
use tracemine_cli::{run, Cli, EXIT_INVALID, EXIT_OK, EXIT_WARNINGS};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_INVALID as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let quiet = cli.quiet;
    match run(cli) {
        Ok(outcome) => {
            for n in &outcome.notices {
                eprintln!("note: {n}");
            }
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            if !quiet {
                for line in &outcome.summary {
                    println!("{line}");
                }
                println!("wrote {}", outcome.dir.display());
            }
            ExitCode::from(if outcome.warnings.is_empty() {
                EXIT_OK
            } else {
                EXIT_WARNINGS
            } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
