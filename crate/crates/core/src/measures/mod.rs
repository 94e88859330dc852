//! The eleven time-series measures, in nats.
//!
//! Every measure aligns the embedded blocks it needs once, then combines
//! entropy or mutual-information estimates computed on that single
//! alignment. Sharing the alignment keeps identities such as
//! `H(X,Y) = H(X) + H(Y|X)` exact on finite samples.
//!
//! Before estimation the involved columns are prepared per estimator:
//! the kernel estimator standardizes each column, and the nearest-neighbour
//! estimators add tie-breaking jitter seeded by the request's noise seed and
//! the column name.

mod formula;
mod granger;
mod request;

use serde::{Deserialize, Serialize};

use crate::embedding::{align, AlignedSamples};
use crate::error::{Error, Result};
use crate::estimators::{
    add_tie_noise, cmi_ksg, entropy_gaussian, entropy_kernel, entropy_knn, mi_gaussian, mi_ksg,
    EstimatorKind, DEFAULT_TIE_NOISE,
};
use crate::series::{standardize, Dataset, TimeSeries};

pub(crate) use formula::{block_columns, evaluate, layout, InfoEngine};
pub use formula::{sum_terms, Term};
pub use granger::granger_from_blocks;
pub use request::{DiMode, MeasureId, MeasureRequest, DEFAULT_DI_WINDOW, DEFAULT_NOISE_SEED};

/// Outcome of one measure evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    /// Value in nats; always equal to [`sum_terms`] of `terms`.
    pub value: f64,
    pub n_eff: usize,
    pub request: MeasureRequest,
    /// Estimator used for mutual-information terms.
    pub estimator: EstimatorKind,
    /// Estimator used for entropy terms (KSG requests fall back to
    /// Kozachenko–Leonenko with the same neighbour count).
    pub entropy_estimator: EstimatorKind,
    pub standardized: bool,
    pub terms: Vec<Term>,
}

/// Entropy estimator paired with a mutual-information estimator.
pub fn entropy_estimator_for(estimator: EstimatorKind) -> EstimatorKind {
    match estimator {
        EstimatorKind::Ksg { k_nn } => EstimatorKind::Kozachenko { k_nn },
        other => other,
    }
}

/// Stable 64-bit FNV-1a, used to derive per-column jitter seeds.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Jitter seed for one column under a request-level seed.
pub fn column_noise_seed(noise_seed: u64, column: &str) -> u64 {
    noise_seed ^ fnv1a(column.as_bytes())
}

fn prepare_column(series: &TimeSeries, estimator: EstimatorKind, noise_seed: u64) -> Result<TimeSeries> {
    // Constant columns are rejected for every estimator, not only the kernel one.
    let scaled = standardize(series)?;
    let series = match estimator {
        EstimatorKind::Kernel { .. } => scaled,
        _ => series.clone(),
    };
    if !estimator.uses_neighbors() {
        return Ok(series);
    }
    let as_matrix = ndarray::Array2::from_shape_vec((series.len(), 1), series.values().to_vec())
        .expect("column vector shape");
    let noisy = add_tie_noise(
        &as_matrix,
        DEFAULT_TIE_NOISE,
        column_noise_seed(noise_seed, series.name()),
    );
    Ok(series.with_values(noisy.into_raw_vec_and_offset().0))
}

/// Dataset restricted to the request's columns, prepared for `estimator`.
fn prepare(dataset: &Dataset, req: &MeasureRequest, estimator: EstimatorKind) -> Result<Dataset> {
    let mut names = vec![req.target.as_str()];
    if let Some(source) = req.source.as_deref() {
        if source != req.target {
            names.push(source);
        }
    }
    let columns = names
        .into_iter()
        .map(|n| prepare_column(dataset.column(n)?, estimator, req.noise_seed))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(columns)
}

struct ContinuousEngine<'a> {
    samples: &'a AlignedSamples,
    estimator: EstimatorKind,
    entropy_estimator: EstimatorKind,
}

impl ContinuousEngine<'_> {
    fn matrix(&self, vars: &[usize]) -> ndarray::Array2<f64> {
        self.samples.rows().select(ndarray::Axis(1), vars)
    }
}

impl InfoEngine for ContinuousEngine<'_> {
    fn entropy(&self, vars: &[usize]) -> Result<f64> {
        let m = self.matrix(vars);
        match self.entropy_estimator {
            EstimatorKind::Gaussian => entropy_gaussian(&m),
            EstimatorKind::Kernel { width } => entropy_kernel(&m, width),
            EstimatorKind::Kozachenko { k_nn } | EstimatorKind::Ksg { k_nn } => entropy_knn(&m, k_nn),
        }
    }

    fn mi(&self, x: &[usize], y: &[usize]) -> Result<f64> {
        match self.estimator {
            EstimatorKind::Gaussian => mi_gaussian(&self.matrix(x), &self.matrix(y)),
            EstimatorKind::Ksg { k_nn } => mi_ksg(&self.matrix(x), &self.matrix(y), k_nn),
            _ => {
                let joint: Vec<usize> = x.iter().chain(y).copied().collect();
                Ok(self.entropy(x)? + self.entropy(y)? - self.entropy(&joint)?)
            }
        }
    }

    fn cmi(&self, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64> {
        if let EstimatorKind::Ksg { k_nn } = self.estimator {
            return cmi_ksg(&self.matrix(x), &self.matrix(y), &self.matrix(z), k_nn);
        }
        if z.is_empty() {
            return self.mi(x, y);
        }
        let cat = |parts: &[&[usize]]| -> Vec<usize> { parts.concat() };
        Ok(self.entropy(&cat(&[x, z]))? - self.entropy(z)? - self.entropy(&cat(&[x, z, y]))?
            + self.entropy(&cat(&[z, y]))?)
    }

    fn native_cmi(&self) -> bool {
        matches!(self.estimator, EstimatorKind::Ksg { .. })
    }
}

/// Evaluates one measure on a dataset.
pub fn compute(dataset: &Dataset, req: &MeasureRequest) -> Result<MeasureResult> {
    let blocks = layout(req)?;
    let estimator = req.effective_estimator();
    let entropy_estimator = entropy_estimator_for(estimator);
    let prepared = prepare(dataset, req, estimator)?;
    let aligned = align(&prepared, &blocks)?;
    estimator.validate(aligned.n_eff())?;

    let terms = if req.measure == MeasureId::GrangerCausality {
        let cols = block_columns(&blocks);
        let pick = |i: usize| aligned.rows().select(ndarray::Axis(1), &cols[i]);
        let gc = granger_from_blocks(&pick(0), &pick(1), &pick(2))?;
        vec![Term {
            label: "ln(RSS_reduced/RSS_full)".into(),
            coefficient: 1.0,
            estimate: gc,
        }]
    } else {
        let engine = ContinuousEngine {
            samples: &aligned,
            estimator,
            entropy_estimator,
        };
        evaluate(req, &blocks, &engine)?
    };
    let value = sum_terms(&terms);
    if !value.is_finite() {
        return Err(Error::DomainError(value));
    }
    Ok(MeasureResult {
        value,
        n_eff: aligned.n_eff(),
        request: req.clone(),
        estimator,
        entropy_estimator,
        standardized: matches!(estimator, EstimatorKind::Kernel { .. }),
        terms,
    })
}

pub fn entropy(dataset: &Dataset, x: &str, estimator: EstimatorKind) -> Result<MeasureResult> {
    compute(dataset, &MeasureRequest::single(MeasureId::Entropy, x).with_estimator(estimator))
}

pub fn joint_entropy(dataset: &Dataset, x: &str, y: &str, estimator: EstimatorKind) -> Result<MeasureResult> {
    compute(dataset, &MeasureRequest::pair(MeasureId::JointEntropy, x, y).with_estimator(estimator))
}

pub fn mutual_information(dataset: &Dataset, x: &str, y: &str, estimator: EstimatorKind) -> Result<MeasureResult> {
    compute(
        dataset,
        &MeasureRequest::pair(MeasureId::MutualInformation, x, y).with_estimator(estimator),
    )
}

/// `H(Y | X)` with `x` as the conditioning source.
pub fn conditional_entropy(dataset: &Dataset, x: &str, y: &str, estimator: EstimatorKind) -> Result<MeasureResult> {
    compute(
        dataset,
        &MeasureRequest::pair(MeasureId::ConditionalEntropy, x, y).with_estimator(estimator),
    )
}

pub fn active_information_storage(
    dataset: &Dataset,
    x: &str,
    k: usize,
    tau: usize,
    estimator: EstimatorKind,
) -> Result<MeasureResult> {
    let req = MeasureRequest::single(MeasureId::ActiveInformationStorage, x)
        .with_estimator(estimator)
        .with_memory(k, 1)
        .with_lags(1, tau);
    compute(dataset, &req)
}

pub fn stochastic_interaction(dataset: &Dataset, x: &str, y: &str, estimator: EstimatorKind) -> Result<MeasureResult> {
    compute(
        dataset,
        &MeasureRequest::pair(MeasureId::StochasticInteraction, x, y).with_estimator(estimator),
    )
}

/// `I(X_t; Y_{t+1})`.
pub fn time_lagged_mi(dataset: &Dataset, x: &str, y: &str, estimator: EstimatorKind) -> Result<MeasureResult> {
    compute(dataset, &MeasureRequest::pair(MeasureId::TimeLaggedMi, x, y).with_estimator(estimator))
}

/// `H(Y || X)(k)`.
pub fn causally_conditioned_entropy(
    dataset: &Dataset,
    x: &str,
    y: &str,
    k: usize,
    estimator: EstimatorKind,
) -> Result<MeasureResult> {
    let req = MeasureRequest::pair(MeasureId::CausallyConditionedEntropy, x, y)
        .with_estimator(estimator)
        .with_memory(k, k);
    compute(dataset, &req)
}

pub fn directed_information(
    dataset: &Dataset,
    x: &str,
    y: &str,
    max_window: usize,
    mode: DiMode,
    estimator: EstimatorKind,
) -> Result<MeasureResult> {
    let req = MeasureRequest::pair(MeasureId::DirectedInformation, x, y)
        .with_estimator(estimator)
        .with_window(max_window, mode);
    compute(dataset, &req)
}

#[allow(clippy::too_many_arguments)]
pub fn transfer_entropy(
    dataset: &Dataset,
    x: &str,
    y: &str,
    k: usize,
    l: usize,
    tau_source: usize,
    tau_target: usize,
    estimator: EstimatorKind,
) -> Result<MeasureResult> {
    let req = MeasureRequest::pair(MeasureId::TransferEntropy, x, y)
        .with_estimator(estimator)
        .with_memory(k, l)
        .with_lags(tau_source, tau_target);
    compute(dataset, &req)
}

pub fn granger_causality(dataset: &Dataset, x: &str, y: &str, k: usize, l: usize) -> Result<MeasureResult> {
    let req = MeasureRequest::pair(MeasureId::GrangerCausality, x, y).with_memory(k, l);
    compute(dataset, &req)
}
