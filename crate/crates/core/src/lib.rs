//! Information-theoretic measures for multivariate time series.
//!
//! Entropies, mutual informations and the directed measures built from them
//! (transfer entropy, directed information, Granger causality, ...) are
//! estimated in nats with Gaussian, box-kernel, Kozachenko–Leonenko or
//! Kraskov–Stögbauer–Grassberger estimators.
//!
//! ```
//! use tsinfo_core::measures::{compute, MeasureId, MeasureRequest};
//! use tsinfo_core::oracle::{gen_var1, Var1System, DEFAULT_BURN_IN};
//!
//! let data = gen_var1(&Var1System::var_a(), 2_000, 1, DEFAULT_BURN_IN).unwrap();
//! let req = MeasureRequest::pair(MeasureId::TransferEntropy, "X", "Y");
//! let te = compute(&data, &req).unwrap();
//! assert!(te.value > 0.2);
//! ```

pub mod embedding;
pub mod error;
pub mod estimators;
pub mod measures;
pub mod oracle;
pub mod series;

pub use embedding::{align, embed, AlignedSamples, BlockSpec, EmbeddingSpec};
pub use error::{Error, Result};
pub use estimators::EstimatorKind;
pub use measures::{compute, MeasureId, MeasureRequest, MeasureResult};
pub use series::{standardize, Dataset, DiscreteSeries, TimeSeries};
