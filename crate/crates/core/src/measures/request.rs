use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;

/// The eleven measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureId {
    Entropy,
    JointEntropy,
    MutualInformation,
    ConditionalEntropy,
    ActiveInformationStorage,
    StochasticInteraction,
    TimeLaggedMi,
    CausallyConditionedEntropy,
    DirectedInformation,
    TransferEntropy,
    GrangerCausality,
}

impl MeasureId {
    pub const ALL: [MeasureId; 11] = [
        MeasureId::Entropy,
        MeasureId::JointEntropy,
        MeasureId::MutualInformation,
        MeasureId::ConditionalEntropy,
        MeasureId::ActiveInformationStorage,
        MeasureId::StochasticInteraction,
        MeasureId::TimeLaggedMi,
        MeasureId::CausallyConditionedEntropy,
        MeasureId::DirectedInformation,
        MeasureId::TransferEntropy,
        MeasureId::GrangerCausality,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureId::Entropy => "entropy",
            MeasureId::JointEntropy => "joint_entropy",
            MeasureId::MutualInformation => "mutual_information",
            MeasureId::ConditionalEntropy => "conditional_entropy",
            MeasureId::ActiveInformationStorage => "active_information_storage",
            MeasureId::StochasticInteraction => "stochastic_interaction",
            MeasureId::TimeLaggedMi => "time_lagged_mi",
            MeasureId::CausallyConditionedEntropy => "causally_conditioned_entropy",
            MeasureId::DirectedInformation => "directed_information",
            MeasureId::TransferEntropy => "transfer_entropy",
            MeasureId::GrangerCausality => "granger_causality",
        }
    }

    /// Entropy and active information storage describe one process.
    pub fn is_single_process(self) -> bool {
        matches!(self, MeasureId::Entropy | MeasureId::ActiveInformationStorage)
    }

    /// Pairwise measures whose value changes when source and target swap.
    pub fn is_directed(self) -> bool {
        matches!(
            self,
            MeasureId::ConditionalEntropy
                | MeasureId::TimeLaggedMi
                | MeasureId::CausallyConditionedEntropy
                | MeasureId::DirectedInformation
                | MeasureId::TransferEntropy
                | MeasureId::GrangerCausality
        )
    }

    pub fn is_order_dependent(self) -> bool {
        !matches!(
            self,
            MeasureId::Entropy
                | MeasureId::JointEntropy
                | MeasureId::MutualInformation
                | MeasureId::ConditionalEntropy
        )
    }

    /// Estimator used when the caller does not choose one: KSG for measures
    /// that are mutual informations, Kozachenko–Leonenko for those assembled
    /// from entropies.
    pub fn default_estimator(self) -> EstimatorKind {
        match self {
            MeasureId::MutualInformation
            | MeasureId::ActiveInformationStorage
            | MeasureId::TimeLaggedMi
            | MeasureId::TransferEntropy => EstimatorKind::ksg(),
            MeasureId::GrangerCausality => EstimatorKind::Gaussian,
            _ => EstimatorKind::kozachenko(),
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s {
            "entropy" | "h" => MeasureId::Entropy,
            "joint_entropy" | "je" => MeasureId::JointEntropy,
            "mutual_information" | "mi" => MeasureId::MutualInformation,
            "conditional_entropy" | "ce" => MeasureId::ConditionalEntropy,
            "active_information_storage" | "ais" => MeasureId::ActiveInformationStorage,
            "stochastic_interaction" | "si" => MeasureId::StochasticInteraction,
            "time_lagged_mi" | "tlmi" => MeasureId::TimeLaggedMi,
            "causally_conditioned_entropy" | "cce" => MeasureId::CausallyConditionedEntropy,
            "directed_information" | "di" => MeasureId::DirectedInformation,
            "transfer_entropy" | "te" => MeasureId::TransferEntropy,
            "granger_causality" | "gc" => MeasureId::GrangerCausality,
            other => return Err(Error::InvalidParameter(format!("unknown measure `{other}`"))),
        };
        Ok(id)
    }
}

/// How directed information estimates `H(Y_{t+1} | Y_t^(k))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiMode {
    /// Joint minus marginal entropy.
    #[default]
    Exact,
    /// `H(Y_{t+1}^(k+1)) / (k + 1)`, the block-entropy-rate shortcut.
    PooledApprox,
}

impl DiMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiMode::Exact => "exact",
            DiMode::PooledApprox => "pooled_approx",
        }
    }
}

impl FromStr for DiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DiMode::Exact),
            "pooled_approx" | "pooled-approx" => Ok(DiMode::PooledApprox),
            other => Err(Error::InvalidParameter(format!("unknown DI mode `{other}`"))),
        }
    }
}

pub const DEFAULT_DI_WINDOW: usize = 5;
pub const DEFAULT_NOISE_SEED: u64 = 0;

/// A measure to evaluate on named columns, with all of its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRequest {
    pub measure: MeasureId,
    pub source: Option<String>,
    pub target: String,
    pub estimator: EstimatorKind,
    /// Target memory length.
    pub k: usize,
    /// Source memory length.
    pub l: usize,
    pub tau_source: usize,
    pub tau_target: usize,
    /// Largest window of directed information (exclusive upper memory length).
    pub max_window: usize,
    pub di_mode: DiMode,
    /// Seed of the tie-breaking jitter used by nearest-neighbour estimators.
    pub noise_seed: u64,
}

impl MeasureRequest {
    /// Request with default parameters for a single-process measure.
    pub fn single(measure: MeasureId, target: impl Into<String>) -> Self {
        Self::build(measure, None, target.into())
    }

    /// Request with default parameters for a pairwise measure.
    pub fn pair(measure: MeasureId, source: impl Into<String>, target: impl Into<String>) -> Self {
        Self::build(measure, Some(source.into()), target.into())
    }

    fn build(measure: MeasureId, source: Option<String>, target: String) -> Self {
        Self {
            measure,
            source,
            target,
            estimator: measure.default_estimator(),
            k: 1,
            l: 1,
            tau_source: 1,
            tau_target: 1,
            max_window: DEFAULT_DI_WINDOW,
            di_mode: DiMode::Exact,
            noise_seed: DEFAULT_NOISE_SEED,
        }
    }

    pub fn with_estimator(mut self, estimator: EstimatorKind) -> Self {
        self.estimator = estimator;
        self
    }

    pub fn with_memory(mut self, k: usize, l: usize) -> Self {
        self.k = k;
        self.l = l;
        self
    }

    pub fn with_lags(mut self, tau_source: usize, tau_target: usize) -> Self {
        self.tau_source = tau_source;
        self.tau_target = tau_target;
        self
    }

    pub fn with_window(mut self, max_window: usize, di_mode: DiMode) -> Self {
        self.max_window = max_window;
        self.di_mode = di_mode;
        self
    }

    pub fn with_noise_seed(mut self, seed: u64) -> Self {
        self.noise_seed = seed;
        self
    }

    /// Estimator that actually runs: the Gaussian least-squares route for
    /// Granger causality regardless of the request.
    pub fn effective_estimator(&self) -> EstimatorKind {
        match self.measure {
            MeasureId::GrangerCausality => EstimatorKind::Gaussian,
            _ => self.estimator,
        }
    }

    pub(crate) fn source_name(&self) -> Result<&str> {
        self.source
            .as_deref()
            .ok_or_else(|| Error::SourceRequired(self.measure.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.measure;
        if m.is_single_process() && self.source.is_some() {
            return Err(Error::SourceNotAllowed(m.to_string()));
        }
        if !m.is_single_process() {
            self.source_name()?;
        }
        if self.tau_source == 0 || self.tau_target == 0 {
            return Err(Error::InvalidParameter("tau must be >= 1".into()));
        }
        let needs_k = matches!(
            m,
            MeasureId::ActiveInformationStorage
                | MeasureId::CausallyConditionedEntropy
                | MeasureId::TransferEntropy
                | MeasureId::GrangerCausality
        );
        if needs_k && self.k == 0 {
            return Err(Error::InvalidParameter(format!("{m} needs k >= 1")));
        }
        let needs_l = matches!(m, MeasureId::TransferEntropy | MeasureId::GrangerCausality);
        if needs_l && self.l == 0 {
            return Err(Error::InvalidParameter(format!("{m} needs l >= 1")));
        }
        if m == MeasureId::DirectedInformation && self.max_window == 0 {
            return Err(Error::InvalidParameter("directed information needs K >= 1".into()));
        }
        Ok(())
    }

    /// Parameters that influence this measure, as ordered `key=value` pairs.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let mut out = self.effective_estimator().params();
        if self.effective_estimator().uses_neighbors() {
            out.push(("noise_seed", self.noise_seed.to_string()));
        }
        let m = self.measure;
        match m {
            MeasureId::ActiveInformationStorage => {
                out.push(("k", self.k.to_string()));
                out.push(("tau", self.tau_target.to_string()));
            }
            MeasureId::CausallyConditionedEntropy => {
                out.push(("k", self.k.to_string()));
                out.push(("tau_source", self.tau_source.to_string()));
                out.push(("tau_target", self.tau_target.to_string()));
            }
            MeasureId::DirectedInformation => {
                out.push(("K", self.max_window.to_string()));
                out.push(("di_mode", self.di_mode.as_str().to_string()));
                out.push(("tau_source", self.tau_source.to_string()));
                out.push(("tau_target", self.tau_target.to_string()));
            }
            MeasureId::TransferEntropy | MeasureId::GrangerCausality => {
                out.push(("k", self.k.to_string()));
                out.push(("l", self.l.to_string()));
                out.push(("tau_source", self.tau_source.to_string()));
                out.push(("tau_target", self.tau_target.to_string()));
            }
            _ => {}
        }
        out
    }
}
