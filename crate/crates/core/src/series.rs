//! Time-series containers.
//!
//! All containers validate on construction and are immutable afterwards, so
//! they can be shared freely between concurrent measure evaluations.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// A single real-valued realization `x_1, ..., x_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.len() < 2 {
            return Err(Error::TooShort {
                name,
                len: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { name, index });
        }
        Ok(Self { name, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample mean and sample standard deviation (N - 1 denominator).
    pub fn mean_sd(&self) -> (f64, f64) {
        mean_sd(&self.values)
    }

    /// Returns the series with the given values permuted, keeping the name.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            values: order.iter().map(|&i| self.values[i]).collect(),
        }
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            name: self.name.clone(),
            values,
        }
    }
}

pub(crate) fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Rescales a series to sample mean 0 and sample standard deviation 1.
pub fn standardize(series: &TimeSeries) -> Result<TimeSeries> {
    let (mean, sd) = series.mean_sd();
    // A constant series can still leave rounding residue in `sd`.
    let scale = series.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sd <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) * 4.0 || sd == 0.0 {
        return Err(Error::ZeroVariance {
            name: series.name.clone(),
        });
    }
    Ok(series.with_values(series.values.iter().map(|v| (v - mean) / sd).collect()))
}

/// A T x M table of equally long, uniquely named real series.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<TimeSeries>,
}

impl Dataset {
    pub fn new(columns: Vec<TimeSeries>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(first) = columns.first() {
            let expected = first.len();
            for c in &columns {
                if c.len() != expected {
                    return Err(Error::LengthMismatch {
                        name: c.name.clone(),
                        len: c.len(),
                        expected,
                    });
                }
                if !seen.insert(c.name.as_str()) {
                    return Err(Error::DuplicateName(c.name.clone()));
                }
            }
        }
        Ok(Self { columns })
    }

    /// Number of time points T (0 for an empty dataset).
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, TimeSeries::len)
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[TimeSeries] {
        &self.columns
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(TimeSeries::name)
    }

    pub fn column(&self, name: &str) -> Result<&TimeSeries> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Applies one row permutation to every column.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        Self {
            columns: self.columns.iter().map(|c| c.permuted(order)).collect(),
        }
    }

    /// Replaces the column with the same name.
    pub fn replace(&self, column: TimeSeries) -> Result<Self> {
        let mut columns = self.columns.clone();
        let slot = columns
            .iter_mut()
            .find(|c| c.name == column.name)
            .ok_or_else(|| Error::UnknownColumn(column.name.clone()))?;
        *slot = column;
        Self::new(columns)
    }
}

/// A sequence of symbols drawn from `0..alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSeries {
    name: String,
    symbols: Vec<u32>,
    alphabet: u32,
}

impl DiscreteSeries {
    pub fn new(name: impl Into<String>, symbols: Vec<u32>, alphabet: u32) -> Result<Self> {
        let name = name.into();
        if symbols.len() < 2 {
            return Err(Error::TooShort {
                name,
                len: symbols.len(),
            });
        }
        if let Some(index) = symbols.iter().position(|&s| s >= alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: symbols[index],
                index,
                alphabet,
            });
        }
        Ok(Self {
            name,
            symbols,
            alphabet,
        })
    }

    /// Infers the alphabet as `max symbol + 1`.
    pub fn from_symbols(name: impl Into<String>, symbols: Vec<u32>) -> Result<Self> {
        let alphabet = symbols.iter().max().map_or(1, |m| m + 1);
        Self::new(name, symbols, alphabet)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}
