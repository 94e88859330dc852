use thiserror::Error;

/// Errors raised anywhere in the measure pipeline.
///
/// Every variant maps to a stable snake_case code (see [`Error::code`]) so that
/// front ends can report failures as data instead of aborting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series `{name}` has zero variance")]
    ZeroVariance { name: String },

    #[error("series `{name}` is too short: {len} samples, need at least 2")]
    TooShort { name: String, len: usize },

    #[error("series `{name}` has a non-finite value at index {index}")]
    NonFinite { name: String, index: usize },

    #[error("column `{name}` has length {len}, expected {expected}")]
    LengthMismatch {
        name: String,
        len: usize,
        expected: usize,
    },

    #[error("duplicate column name `{0}`")]
    DuplicateName(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("symbol {symbol} at index {index} is outside alphabet of size {alphabet}")]
    SymbolOutOfRange {
        symbol: u32,
        index: usize,
        alphabet: u32,
    },

    #[error("time index {index} outside [1, {len}]")]
    OutOfRange { index: i64, len: usize },

    #[error("no present index has every block defined (series length {len}, first valid index {start})")]
    EmptyAlignment { len: usize, start: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {0} outside the function domain")]
    DomainError(f64),

    #[error("sample covariance is singular")]
    SingularCovariance,

    #[error("sample {index} coincides with its nearest neighbours (zero radius)")]
    DegenerateGeometry { index: usize },

    #[error("sample {index} has no neighbours within the kernel width")]
    EmptyNeighborhood { index: usize },

    #[error("variables are perfectly correlated; mutual information is infinite")]
    PerfectCorrelation,

    #[error("least-squares design matrix is rank deficient")]
    RankDeficient,

    #[error("full model residuals vanish; log residual ratio is infinite")]
    ZeroResidual,

    #[error("coefficient matrix has spectral radius {0} >= 1")]
    NonStationary(f64),

    #[error("analytic oracle supports memory length 1 only (got {0})")]
    UnsupportedOrder(usize),

    #[error("measure `{0}` is not available on this path")]
    UnsupportedMeasure(String),

    #[error("measure `{0}` takes no source column")]
    SourceNotAllowed(String),

    #[error("measure `{0}` requires a source column")]
    SourceRequired(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVariance { .. } => "zero_variance",
            Error::TooShort { .. } => "too_short",
            Error::NonFinite { .. } => "non_finite",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::DuplicateName(_) => "duplicate_name",
            Error::UnknownColumn(_) => "unknown_column",
            Error::SymbolOutOfRange { .. } => "symbol_out_of_range",
            Error::OutOfRange { .. } => "out_of_range",
            Error::EmptyAlignment { .. } => "empty_alignment",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::DomainError(_) => "domain_error",
            Error::SingularCovariance => "singular_covariance",
            Error::DegenerateGeometry { .. } => "degenerate_geometry",
            Error::EmptyNeighborhood { .. } => "empty_neighborhood",
            Error::PerfectCorrelation => "perfect_correlation",
            Error::RankDeficient => "rank_deficient",
            Error::ZeroResidual => "zero_residual",
            Error::NonStationary(_) => "non_stationary",
            Error::UnsupportedOrder(_) => "unsupported_order",
            Error::UnsupportedMeasure(_) => "unsupported_measure",
            Error::SourceNotAllowed(_) => "source_not_allowed",
            Error::SourceRequired(_) => "source_required",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
