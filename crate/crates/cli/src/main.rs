use std::process::ExitCode;

use clap::Parser;
use tsinfo_cli::{execute, output, Args, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_from(Args::parse()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match execute(&config) {
        Ok((report, outcome)) => {
            for line in output::summary_lines(&report) {
                eprintln!("{line}");
            }
            for row in report.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "warning: {} {} -> {}: {}",
                    row.measure,
                    row.source,
                    row.target,
                    row.message.as_deref().unwrap_or_default()
                );
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
