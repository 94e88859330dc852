//! Library side of the `tsinfo` command: input parsing, sweep planning and
//! evaluation, and output writers.

pub mod config;
pub mod input;
pub mod output;
pub mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};

use thiserror::Error;

pub use config::{Args, Format, Mode, RunConfig};
pub use input::{load_csv, read_csv, InputError};
pub use sweep::{plan, run, Report, ResultRow, Task};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// Exit status of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// At least one value was computed (failed pairs may still be present).
    Success,
    /// Every requested cell failed.
    NothingComputed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::NothingComputed => 2,
        }
    }
}

/// Loads the input, runs the sweep and writes results (and the sidecar
/// when writing to a file).
pub fn execute(config: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let dataset = load_csv(&config.input)?;
    let names: Vec<String> = dataset.names().map(String::from).collect();
    let tasks = plan(config, &names).map_err(CliError::Config)?;
    let report = run(config, &dataset, &tasks);

    let write_err = |path: &str| {
        let path = path.to_string();
        move |source| CliError::Write { path, source }
    };
    match &config.output {
        Some(path) => {
            let shown = path.display().to_string();
            let file = File::create(path).map_err(write_err(&shown))?;
            write_results(BufWriter::new(file), config, &report).map_err(write_err(&shown))?;
            let meta_path = output::sidecar_path(path);
            let shown = meta_path.display().to_string();
            let mut meta = BufWriter::new(File::create(&meta_path).map_err(write_err(&shown))?);
            serde_json::to_writer_pretty(&mut meta, &output::Metadata::new(config, &report))
                .map_err(std::io::Error::from)
                .and_then(|_| writeln!(meta))
                .and_then(|_| meta.flush())
                .map_err(write_err(&shown))?;
        }
        None => {
            let stdout = std::io::stdout().lock();
            write_results(stdout, config, &report).map_err(write_err("stdout"))?;
        }
    }
    let outcome = if report.computed() == 0 {
        Outcome::NothingComputed
    } else {
        Outcome::Success
    };
    Ok((report, outcome))
}

fn write_results<W: Write>(mut out: W, config: &RunConfig, report: &Report) -> std::io::Result<()> {
    match config.format {
        Format::Csv => output::write_csv(&mut out, config, report)?,
        Format::Json => output::write_json(&mut out, config, report)?,
    }
    out.flush()
}
