//! Delay embedding and alignment of embedded blocks.
//!
//! Time indices are 1-based throughout: a series holds `x_1, ..., x_T`. A block
//! described by [`EmbeddingSpec`] `{k, tau, lead}` evaluated at present index
//! `t` is the vector `(x_{t+lead}, x_{t+lead-tau}, ..., x_{t+lead-(k-1)tau})`,
//! most recent value first.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Dataset;

/// Past-vector layout: memory length, stride between values, and the offset
/// of the most recent value relative to the present index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub k: usize,
    pub tau: usize,
    pub lead: i64,
}

impl EmbeddingSpec {
    pub fn new(k: usize, tau: usize, lead: i64) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidParameter("tau must be >= 1".into()));
        }
        Ok(Self { k, tau, lead })
    }

    /// The present value itself.
    pub const fn present() -> Self {
        Self {
            k: 1,
            tau: 1,
            lead: 0,
        }
    }

    /// `k` values ending one step before the present.
    pub const fn past(k: usize, tau: usize) -> Self {
        Self { k, tau, lead: -1 }
    }

    /// `k` values ending at the present.
    pub const fn ending_at_present(k: usize, tau: usize) -> Self {
        Self { k, tau, lead: 0 }
    }

    pub const fn null() -> Self {
        Self {
            k: 0,
            tau: 1,
            lead: 0,
        }
    }

    pub fn is_null(&self) -> bool {
        self.k == 0
    }

    /// How far back from the present the oldest value reaches.
    fn reach(&self) -> i64 {
        (self.k as i64 - 1) * self.tau as i64 - self.lead
    }

    /// First present index at which the block is fully defined.
    pub fn first_valid_index(&self) -> i64 {
        if self.is_null() {
            1
        } else {
            (1 + self.reach()).max(1)
        }
    }
}

/// Extracts the embedded vector at `present_index`.
pub fn embed<T: Copy>(values: &[T], spec: EmbeddingSpec, present_index: usize) -> Result<Vec<T>> {
    let len = values.len();
    let newest = present_index as i64 + spec.lead;
    (0..spec.k)
        .map(|j| {
            let idx = newest - (j * spec.tau) as i64;
            if idx < 1 || idx > len as i64 {
                Err(Error::OutOfRange { index: idx, len })
            } else {
                Ok(values[(idx - 1) as usize])
            }
        })
        .collect()
}

/// Inclusive 1-based range of present indices where every block is defined.
pub fn valid_range(len: usize, specs: &[EmbeddingSpec]) -> Result<(usize, usize)> {
    let active = specs.iter().filter(|s| !s.is_null());
    let start = active.clone().map(|s| s.first_valid_index()).max().unwrap_or(1);
    let max_lead = active.map(|s| s.lead).max().unwrap_or(0).max(0);
    let end = len as i64 - max_lead;
    if start > end {
        return Err(Error::EmptyAlignment { len, start });
    }
    Ok((start as usize, end as usize))
}

/// One embedded block of an alignment request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub column: String,
    pub spec: EmbeddingSpec,
    pub label: String,
}

impl BlockSpec {
    pub fn new(column: impl Into<String>, spec: EmbeddingSpec, label: impl Into<String>) -> Self {
        Self {
            column: column.into(),
            spec,
            label: label.into(),
        }
    }
}

/// Gathers rows of concatenated block vectors over `range`, row-major.
pub(crate) fn gather<T: Copy>(
    columns: &[&[T]],
    specs: &[EmbeddingSpec],
    range: (usize, usize),
) -> Result<Vec<T>> {
    let width: usize = specs.iter().map(|s| s.k).sum();
    let mut out = Vec::with_capacity(width * (range.1 + 1 - range.0));
    for t in range.0..=range.1 {
        for (values, spec) in columns.iter().zip(specs) {
            out.extend(embed(values, *spec, t)?);
        }
    }
    Ok(out)
}

/// Joint samples pooled over every present index where all blocks are defined.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedSamples {
    blocks: Vec<(String, usize)>,
    rows: Array2<f64>,
    present_indices: Vec<usize>,
}

impl AlignedSamples {
    pub fn blocks(&self) -> &[(String, usize)] {
        &self.blocks
    }

    pub fn rows(&self) -> &Array2<f64> {
        &self.rows
    }

    pub fn present_indices(&self) -> &[usize] {
        &self.present_indices
    }

    pub fn n_eff(&self) -> usize {
        self.present_indices.len()
    }

    /// Column indices occupied by block `b` in each row.
    pub fn block_columns(&self, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..b].iter().map(|(_, d)| d).sum();
        start..start + self.blocks[b].1
    }

    pub fn block_index(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|(l, _)| l == label)
    }

    /// Sample matrix made of the given blocks, in the order given.
    pub fn select(&self, blocks: &[usize]) -> Array2<f64> {
        let cols: Vec<usize> = blocks.iter().flat_map(|&b| self.block_columns(b)).collect();
        self.rows.select(ndarray::Axis(1), &cols)
    }
}

/// Aligns the requested blocks of `dataset` on their common valid range.
pub fn align(dataset: &Dataset, blocks: &[BlockSpec]) -> Result<AlignedSamples> {
    let columns = blocks
        .iter()
        .map(|b| dataset.column(&b.column).map(|c| c.values()))
        .collect::<Result<Vec<_>>>()?;
    let specs: Vec<EmbeddingSpec> = blocks.iter().map(|b| b.spec).collect();
    let range = valid_range(dataset.len(), &specs)?;
    let data = gather(&columns, &specs, range)?;
    let width: usize = specs.iter().map(|s| s.k).sum();
    let n = range.1 + 1 - range.0;
    let rows = Array2::from_shape_vec((n, width), data)
        .expect("gathered row-major buffer matches its shape");
    Ok(AlignedSamples {
        blocks: blocks.iter().map(|b| (b.label.clone(), b.spec.k)).collect(),
        rows,
        present_indices: (range.0..=range.1).collect(),
    })
}
