//! Exact plug-in (empirical frequency) calculator for discrete series.
//!
//! Uses the same block layouts and term compositions as the continuous
//! estimators, so on a finite discrete sample the identities between
//! measures hold to rounding.

use std::collections::{BTreeMap, HashMap};

use crate::embedding::{gather, valid_range, EmbeddingSpec};
use crate::error::{Error, Result};
use crate::measures::{evaluate, layout, sum_terms, MeasureId, MeasureRequest, Term};
use crate::series::DiscreteSeries;

/// Sparse probability mass function over symbol tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePmf {
    probs: BTreeMap<Vec<u32>, f64>,
}

impl DiscretePmf {
    pub fn new(probs: BTreeMap<Vec<u32>, f64>) -> Result<Self> {
        if probs.values().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidParameter("probabilities must be non-negative".into()));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
        }
        Ok(Self { probs })
    }

    /// Empirical distribution of the given rows.
    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a [u32]>) -> Result<Self> {
        let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let mut n = 0usize;
        for row in rows {
            *counts.entry(row.to_vec()).or_default() += 1;
            n += 1;
        }
        if n == 0 {
            return Err(Error::InvalidParameter("no rows".into()));
        }
        let probs = counts.into_iter().map(|(k, c)| (k, c as f64 / n as f64)).collect();
        Self::new(probs)
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self
            .probs
            .values()
            .filter(|p| **p > 0.0)
            .map(|p| p * p.ln())
            .sum::<f64>()
    }

    /// Distribution of the selected tuple positions.
    pub fn marginal(&self, positions: &[usize]) -> Self {
        let mut probs: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (key, p) in &self.probs {
            *probs.entry(positions.iter().map(|&i| key[i]).collect()).or_default() += p;
        }
        Self { probs }
    }

    pub fn probabilities(&self) -> &BTreeMap<Vec<u32>, f64> {
        &self.probs
    }
}

/// Plug-in value of a measure with its decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PluginResult {
    pub value: f64,
    pub n_eff: usize,
    pub terms: Vec<Term>,
}

struct PluginEngine {
    width: usize,
    rows: Vec<u32>,
}

impl PluginEngine {
    fn counts(&self, vars: &[usize]) -> HashMap<Vec<u32>, usize> {
        let mut counts = HashMap::new();
        for row in self.rows.chunks_exact(self.width.max(1)) {
            *counts.entry(vars.iter().map(|&v| row[v]).collect::<Vec<_>>()).or_default() += 1;
        }
        counts
    }

    fn n(&self) -> usize {
        self.rows.len() / self.width.max(1)
    }
}

impl crate::measures::InfoEngine for PluginEngine {
    fn entropy(&self, vars: &[usize]) -> Result<f64> {
        if vars.is_empty() {
            return Ok(0.0);
        }
        let n = self.n() as f64;
        let mut counts: Vec<usize> = self.counts(vars).into_values().collect();
        // Fixed summation order so repeated calls agree bit for bit.
        counts.sort_unstable();
        Ok(counts
            .into_iter()
            .map(|c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum())
    }

    fn mi(&self, x: &[usize], y: &[usize]) -> Result<f64> {
        let joint: Vec<usize> = x.iter().chain(y).copied().collect();
        Ok(self.entropy(x)? + self.entropy(y)? - self.entropy(&joint)?)
    }

    fn cmi(&self, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64> {
        let cat = |parts: &[&[usize]]| -> Vec<usize> { parts.concat() };
        Ok(self.entropy(&cat(&[x, z]))? - self.entropy(z)? - self.entropy(&cat(&[x, z, y]))?
            + self.entropy(&cat(&[z, y]))?)
    }

    fn native_cmi(&self) -> bool {
        false
    }
}

/// Evaluates a measure exactly on the empirical joint distribution of
/// discrete series. Granger causality has no plug-in form.
pub fn plugin_discrete_measure(series: &[DiscreteSeries], req: &MeasureRequest) -> Result<PluginResult> {
    if req.measure == MeasureId::GrangerCausality {
        return Err(Error::UnsupportedMeasure(req.measure.as_str().into()));
    }
    let blocks = layout(req)?;
    let len = series.first().map_or(0, |s| s.len());
    if let Some(bad) = series.iter().find(|s| s.len() != len) {
        return Err(Error::LengthMismatch {
            name: bad.name().into(),
            len: bad.len(),
            expected: len,
        });
    }
    let columns = blocks
        .iter()
        .map(|b| {
            series
                .iter()
                .find(|s| s.name() == b.column)
                .map(|s| s.symbols())
                .ok_or_else(|| Error::UnknownColumn(b.column.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let specs: Vec<EmbeddingSpec> = blocks.iter().map(|b| b.spec).collect();
    let range = valid_range(len, &specs)?;
    let rows = gather(&columns, &specs, range)?;
    let engine = PluginEngine {
        width: specs.iter().map(|s| s.k).sum(),
        rows,
    };
    let terms = evaluate(req, &blocks, &engine)?;
    Ok(PluginResult {
        value: sum_terms(&terms),
        n_eff: range.1 + 1 - range.0,
        terms,
    })
}
