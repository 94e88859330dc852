//! Entropy and mutual-information estimators over sample matrices.
//!
//! A sample matrix is an `N x d` [`ndarray::Array2`] whose rows are joint
//! samples. Every estimator returns nats.

mod gaussian;
mod kernel;
mod knn;
mod neighbors;
mod noise;
mod special;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gaussian::{entropy_from_covariance, entropy_gaussian, log_det, mi_gaussian, ml_covariance};
pub use kernel::entropy_kernel;
pub use knn::{cmi_ksg, entropy_knn, mi_ksg};
pub use neighbors::{Boundary, NeighborIndex};
pub use noise::{add_tie_noise, DEFAULT_TIE_NOISE};
pub use special::digamma;

pub const DEFAULT_K_NN: usize = 4;
pub const DEFAULT_KERNEL_WIDTH: f64 = 0.5;

/// Which density model backs an entropy or mutual-information estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum EstimatorKind {
    Gaussian,
    Kernel { width: f64 },
    Kozachenko { k_nn: usize },
    Ksg { k_nn: usize },
}

impl EstimatorKind {
    pub fn kernel() -> Self {
        Self::Kernel {
            width: DEFAULT_KERNEL_WIDTH,
        }
    }

    pub fn kozachenko() -> Self {
        Self::Kozachenko { k_nn: DEFAULT_K_NN }
    }

    pub fn ksg() -> Self {
        Self::Ksg { k_nn: DEFAULT_K_NN }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Kernel { .. } => "kernel",
            Self::Kozachenko { .. } => "kozachenko",
            Self::Ksg { .. } => "ksg",
        }
    }

    /// Same family with the given neighbour count or width applied where relevant.
    pub fn with_params(self, k_nn: Option<usize>, width: Option<f64>) -> Self {
        match self {
            Self::Kernel { width: w } => Self::Kernel {
                width: width.unwrap_or(w),
            },
            Self::Kozachenko { k_nn: k } => Self::Kozachenko {
                k_nn: k_nn.unwrap_or(k),
            },
            Self::Ksg { k_nn: k } => Self::Ksg {
                k_nn: k_nn.unwrap_or(k),
            },
            Self::Gaussian => Self::Gaussian,
        }
    }

    pub fn uses_neighbors(&self) -> bool {
        matches!(self, Self::Kozachenko { .. } | Self::Ksg { .. })
    }

    /// Checks parameters against the number of samples they will see.
    pub fn validate(&self, n_eff: usize) -> Result<()> {
        match *self {
            Self::Kernel { width } if !(width > 0.0 && width.is_finite()) => Err(
                Error::InvalidParameter(format!("kernel width must be positive, got {width}")),
            ),
            Self::Kozachenko { k_nn } | Self::Ksg { k_nn } if k_nn == 0 || k_nn >= n_eff => {
                Err(Error::InvalidParameter(format!(
                    "nearest-neighbour count {k_nn} must satisfy 1 <= k < {n_eff}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// `key=value` pairs describing the estimator parameters.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match *self {
            Self::Gaussian => vec![],
            Self::Kernel { width } => vec![("width", width.to_string())],
            Self::Kozachenko { k_nn } | Self::Ksg { k_nn } => vec![("knn", k_nn.to_string())],
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    /// Parses a family name with its default parameters.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "kernel" => Ok(Self::kernel()),
            "kozachenko" => Ok(Self::kozachenko()),
            "ksg" | "kraskov" => Ok(Self::ksg()),
            other => Err(Error::InvalidParameter(format!("unknown estimator `{other}`"))),
        }
    }
}
