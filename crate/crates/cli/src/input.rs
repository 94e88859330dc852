//! CSV ingestion.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use thiserror::Error;
use tsinfo_core::{Dataset, TimeSeries};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}, column `{column}`: `{value}` is not a finite number")]
    ParseError {
        row: u64,
        column: String,
        value: String,
    },
    #[error("row {row} has {found} fields but the header has {expected}")]
    RaggedRows { row: u64, expected: usize, found: usize },
    #[error("column name `{0}` appears more than once in the header")]
    DuplicateHeader(String),
    #[error("the header row is empty")]
    EmptyHeader,
    #[error(transparent)]
    Data(#[from] tsinfo_core::Error),
}

/// Reads a comma-delimited file with a header row into a dataset.
pub fn load_csv(path: &Path) -> Result<Dataset, InputError> {
    let file = File::open(path).map_err(|source| InputError::Open {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file)
}

/// Row numbers in errors count the header as row 1.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset, InputError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(InputError::EmptyHeader);
    }
    for (i, name) in header.iter().enumerate() {
        if header[..i].contains(name) {
            return Err(InputError::DuplicateHeader(name.clone()));
        }
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = idx as u64 + 2;
        if record.len() != header.len() {
            return Err(InputError::RaggedRows {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for ((field, column), name) in record.iter().zip(&mut columns).zip(&header) {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => column.push(v),
                _ => {
                    return Err(InputError::ParseError {
                        row,
                        column: name.clone(),
                        value: field.to_owned(),
                    })
                }
            }
        }
    }

    let series = header
        .into_iter()
        .zip(columns)
        .map(|(name, values)| TimeSeries::new(name, values))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dataset::new(series)?)
}
