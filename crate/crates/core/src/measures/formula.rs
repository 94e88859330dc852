//! Block layouts and entropy/MI compositions shared by every estimation path.
//!
//! Each measure is described once: which embedded blocks it needs (all on
//! one shared alignment) and how entropies or (conditional) mutual
//! informations of those blocks combine into its value. The continuous
//! estimators and the discrete plug-in calculator both evaluate these
//! formulas through [`InfoEngine`].

use serde::{Deserialize, Serialize};

use super::request::{DiMode, MeasureId, MeasureRequest};
use crate::embedding::{BlockSpec, EmbeddingSpec};
use crate::error::Result;

/// Information quantities over column subsets of one aligned sample table.
pub(crate) trait InfoEngine {
    fn entropy(&self, vars: &[usize]) -> Result<f64>;
    fn mi(&self, x: &[usize], y: &[usize]) -> Result<f64>;
    fn cmi(&self, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64>;
    /// True when `cmi` is a native estimator rather than an entropy sum.
    fn native_cmi(&self) -> bool;
}

/// One summand of a measure: `coefficient * estimate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub coefficient: f64,
    pub estimate: f64,
}

impl Term {
    fn new(label: impl Into<String>, coefficient: f64, estimate: f64) -> Self {
        Self {
            label: label.into(),
            coefficient,
            estimate,
        }
    }
}

/// Sum of the terms in order; measures report exactly this value.
pub fn sum_terms(terms: &[Term]) -> f64 {
    terms
        .iter()
        .fold(0.0, |acc, t| acc + t.coefficient * t.estimate)
}

/// Blocks required by `req`, in the order [`evaluate`] indexes them.
pub(crate) fn layout(req: &MeasureRequest) -> Result<Vec<BlockSpec>> {
    req.validate()?;
    let y = req.target.as_str();
    let (k, l, ts, tt) = (req.k, req.l, req.tau_source, req.tau_target);
    let present = EmbeddingSpec::present();
    let blocks = match req.measure {
        MeasureId::Entropy => vec![BlockSpec::new(y, present, "Y")],
        MeasureId::JointEntropy | MeasureId::MutualInformation | MeasureId::ConditionalEntropy => {
            vec![
                BlockSpec::new(req.source_name()?, present, "X"),
                BlockSpec::new(y, present, "Y"),
            ]
        }
        MeasureId::ActiveInformationStorage => vec![
            BlockSpec::new(y, present, "Y+"),
            BlockSpec::new(y, EmbeddingSpec::past(k, tt), "Y-"),
        ],
        MeasureId::StochasticInteraction => {
            let x = req.source_name()?;
            vec![
                BlockSpec::new(x, present, "X+"),
                BlockSpec::new(x, EmbeddingSpec::past(1, 1), "X-"),
                BlockSpec::new(y, present, "Y+"),
                BlockSpec::new(y, EmbeddingSpec::past(1, 1), "Y-"),
            ]
        }
        MeasureId::TimeLaggedMi => vec![
            BlockSpec::new(req.source_name()?, EmbeddingSpec::past(1, 1), "X-"),
            BlockSpec::new(y, present, "Y+"),
        ],
        MeasureId::CausallyConditionedEntropy => vec![
            BlockSpec::new(y, present, "Y+"),
            BlockSpec::new(y, EmbeddingSpec::past(k, tt), "Y-"),
            BlockSpec::new(req.source_name()?, EmbeddingSpec::ending_at_present(k + 1, ts), "X"),
        ],
        MeasureId::DirectedInformation => {
            // Longest histories; shorter memories are prefixes (most recent first).
            let window = req.max_window;
            vec![
                BlockSpec::new(y, present, "Y+"),
                BlockSpec::new(y, EmbeddingSpec::past(window - 1, tt), "Y-"),
                BlockSpec::new(
                    req.source_name()?,
                    EmbeddingSpec::ending_at_present(window, ts),
                    "X",
                ),
            ]
        }
        MeasureId::TransferEntropy | MeasureId::GrangerCausality => vec![
            BlockSpec::new(y, present, "Y+"),
            BlockSpec::new(y, EmbeddingSpec::past(k, tt), "Y-"),
            BlockSpec::new(req.source_name()?, EmbeddingSpec::past(l, ts), "X-"),
        ],
    };
    Ok(blocks)
}

/// Column indices of every block in a layout.
pub(crate) fn block_columns(blocks: &[BlockSpec]) -> Vec<Vec<usize>> {
    let mut offset = 0;
    blocks
        .iter()
        .map(|b| {
            let cols = (offset..offset + b.spec.k).collect();
            offset += b.spec.k;
            cols
        })
        .collect()
}

fn union(parts: &[&[usize]]) -> Vec<usize> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Evaluates `req` on an engine built over the columns of `layout(req)`.
pub(crate) fn evaluate<E: InfoEngine>(
    req: &MeasureRequest,
    blocks: &[BlockSpec],
    engine: &E,
) -> Result<Vec<Term>> {
    let cols = block_columns(blocks);
    let b = |i: usize| cols[i].as_slice();
    let h = |parts: &[&[usize]]| engine.entropy(&union(parts));

    let terms = match req.measure {
        MeasureId::Entropy => vec![Term::new("H(Y)", 1.0, h(&[b(0)])?)],
        MeasureId::JointEntropy => vec![Term::new("H(X,Y)", 1.0, h(&[b(0), b(1)])?)],
        MeasureId::MutualInformation => vec![Term::new("I(X;Y)", 1.0, engine.mi(b(0), b(1))?)],
        MeasureId::ConditionalEntropy => vec![
            Term::new("H(X,Y)", 1.0, h(&[b(0), b(1)])?),
            Term::new("H(X)", -1.0, h(&[b(0)])?),
        ],
        MeasureId::ActiveInformationStorage => {
            vec![Term::new("I(Y-;Y+)", 1.0, engine.mi(b(1), b(0))?)]
        }
        MeasureId::StochasticInteraction => {
            let (xp, xm, yp, ym) = (b(0), b(1), b(2), b(3));
            vec![
                Term::new("H(X+,X-)", 1.0, h(&[xp, xm])?),
                Term::new("H(X-)", -1.0, h(&[xm])?),
                Term::new("H(Y+,Y-)", 1.0, h(&[yp, ym])?),
                Term::new("H(Y-)", -1.0, h(&[ym])?),
                Term::new("H(X+,Y+,X-,Y-)", -1.0, h(&[xp, yp, xm, ym])?),
                Term::new("H(X-,Y-)", 1.0, h(&[xm, ym])?),
            ]
        }
        MeasureId::TimeLaggedMi => vec![Term::new("I(X-;Y+)", 1.0, engine.mi(b(0), b(1))?)],
        MeasureId::CausallyConditionedEntropy => vec![
            Term::new("H(Y+,Y-,X)", 1.0, h(&[b(0), b(1), b(2)])?),
            Term::new("H(Y-,X)", -1.0, h(&[b(1), b(2)])?),
        ],
        MeasureId::DirectedInformation => {
            let (y_now, y_past, x_hist) = (b(0), b(1), b(2));
            let mut terms = Vec::with_capacity(req.max_window);
            for k in 0..req.max_window {
                let yk = &y_past[..k];
                let xk = &x_hist[..k + 1];
                let value = match req.di_mode {
                    DiMode::Exact if k == 0 => engine.mi(y_now, xk)?,
                    DiMode::Exact => engine.cmi(y_now, xk, yk)?,
                    DiMode::PooledApprox => {
                        let rate = h(&[y_now, yk])? / (k + 1) as f64;
                        let cce = h(&[y_now, yk, xk])? - h(&[yk, xk])?;
                        rate - cce
                    }
                };
                terms.push(Term::new(format!("DI(k={k})"), 1.0, value));
            }
            terms
        }
        MeasureId::TransferEntropy if engine.native_cmi() => vec![Term::new(
            "I(Y+;X-|Y-)",
            1.0,
            engine.cmi(b(0), b(2), b(1))?,
        )],
        MeasureId::TransferEntropy => {
            let (yn, ym, xm) = (b(0), b(1), b(2));
            vec![
                Term::new("H(Y+,Y-)", 1.0, h(&[yn, ym])?),
                Term::new("H(Y-)", -1.0, h(&[ym])?),
                Term::new("H(Y+,Y-,X-)", -1.0, h(&[yn, ym, xm])?),
                Term::new("H(Y-,X-)", 1.0, h(&[ym, xm])?),
            ]
        }
        MeasureId::GrangerCausality => {
            unreachable!("granger causality is computed by least squares, not from entropies")
        }
    };
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts_have_expected_widths() {
        let te = MeasureRequest::pair(MeasureId::TransferEntropy, "x", "y").with_memory(2, 3);
        let widths: Vec<usize> = layout(&te).unwrap().iter().map(|b| b.spec.k).collect();
        assert_eq!(widths, vec![1, 2, 3]);

        let cce = MeasureRequest::pair(MeasureId::CausallyConditionedEntropy, "x", "y").with_memory(2, 1);
        let specs: Vec<_> = layout(&cce).unwrap().iter().map(|b| b.spec).collect();
        assert_eq!(specs[2], EmbeddingSpec::ending_at_present(3, 1));
        assert_eq!(specs[1], EmbeddingSpec::past(2, 1));

        let di = MeasureRequest::pair(MeasureId::DirectedInformation, "x", "y")
            .with_window(1, DiMode::Exact);
        let widths: Vec<usize> = layout(&di).unwrap().iter().map(|b| b.spec.k).collect();
        assert_eq!(widths, vec![1, 0, 1]);
    }

    #[test]
    fn block_columns_are_contiguous() {
        let te = MeasureRequest::pair(MeasureId::TransferEntropy, "x", "y").with_memory(2, 3);
        let cols = block_columns(&layout(&te).unwrap());
        assert_eq!(cols, vec![vec![0], vec![1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn sum_is_ordered_fold() {
        let terms = vec![Term::new("a", 1.0, 0.1), Term::new("b", -1.0, 0.3), Term::new("c", 1.0, 0.2)];
        assert_eq!(sum_terms(&terms), (0.0 + 0.1) - 0.3 + 0.2);
    }
}
