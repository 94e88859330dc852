//! Command-line flags and the validated run configuration.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use tsinfo_core::measures::{DiMode, MeasureId, MeasureRequest, DEFAULT_DI_WINDOW, DEFAULT_NOISE_SEED};
use tsinfo_core::EstimatorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One source/target pair.
    Single,
    /// Every pair of columns.
    Pairwise,
    /// The seed column against every other column.
    Seed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Information-theoretic measures between the columns of a time-series CSV.
///
/// Values are reported in nats, one row per (source, target, measure).
#[derive(Debug, Parser)]
#[command(name = "tsinfo", version)]
pub struct Args {
    /// CSV file with a header row; one column per process, one row per time point
    #[arg(long)]
    pub input: PathBuf,

    /// Where to write results (stdout if omitted). A `<output>.meta.json` sidecar is written next to it
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Mode::Pairwise)]
    pub mode: Mode,

    /// Source column for seed mode
    #[arg(long)]
    pub seed_column: Option<String>,

    /// Source column for single mode (default: first column)
    #[arg(long)]
    pub source: Option<String>,

    /// Target column for single mode (default: second column)
    #[arg(long)]
    pub target: Option<String>,

    /// Comma-separated measure ids, e.g. `te,gc,mi` or `transfer_entropy`
    #[arg(long, value_delimiter = ',', default_value = "transfer_entropy")]
    pub measures: Vec<String>,

    /// gaussian, kernel, kozachenko or ksg (default: per measure)
    #[arg(long)]
    pub estimator: Option<String>,

    /// Target memory length
    #[arg(long, default_value_t = 1)]
    pub k: usize,

    /// Source memory length
    #[arg(long, default_value_t = 1)]
    pub l: usize,

    /// Embedding delay for source and target
    #[arg(long, default_value_t = 1)]
    pub tau: usize,

    /// Directed-information window
    #[arg(long = "K", default_value_t = DEFAULT_DI_WINDOW)]
    pub max_window: usize,

    /// Nearest-neighbour count for kozachenko and ksg
    #[arg(long)]
    pub knn: Option<usize>,

    /// Box half-width in standard deviations for the kernel estimator
    #[arg(long)]
    pub kernel_width: Option<f64>,

    /// exact or pooled-approx
    #[arg(long, default_value = "exact")]
    pub di_mode: String,

    /// Seed of the tie-breaking jitter used by nearest-neighbour estimators
    #[arg(long, default_value_t = DEFAULT_NOISE_SEED)]
    pub noise_seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// A fully parsed run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub mode: Mode,
    pub seed_column: Option<String>,
    pub source: Option<String>,
    pub target: Option<String>,
    pub measures: Vec<MeasureId>,
    /// `None` selects each measure's default estimator.
    pub estimator: Option<EstimatorKind>,
    pub k: usize,
    pub l: usize,
    pub tau: usize,
    pub max_window: usize,
    pub knn: Option<usize>,
    pub kernel_width: Option<f64>,
    pub di_mode: DiMode,
    pub noise_seed: u64,
    pub format: Format,
}

impl TryFrom<Args> for RunConfig {
    type Error = String;

    fn try_from(a: Args) -> Result<Self, String> {
        let mut measures = Vec::new();
        for m in a.measures.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
            let id: MeasureId = m.parse().map_err(|e: tsinfo_core::Error| e.to_string())?;
            if !measures.contains(&id) {
                measures.push(id);
            }
        }
        if measures.is_empty() {
            return Err("--measures lists no measure".into());
        }
        let estimator = a
            .estimator
            .as_deref()
            .map(str::parse::<EstimatorKind>)
            .transpose()
            .map_err(|e| e.to_string())?;
        let di_mode = a.di_mode.parse::<DiMode>().map_err(|e| e.to_string())?;
        if a.mode == Mode::Seed && a.seed_column.is_none() {
            return Err("--mode seed requires --seed-column".into());
        }
        if a.tau == 0 {
            return Err("--tau must be at least 1".into());
        }
        if a.k == 0 || a.l == 0 || a.max_window == 0 {
            return Err("--k, --l and --K must be at least 1".into());
        }
        if a.knn == Some(0) {
            return Err("--knn must be at least 1".into());
        }
        if let Some(w) = a.kernel_width {
            if !(w > 0.0 && w.is_finite()) {
                return Err("--kernel-width must be a positive number".into());
            }
        }
        Ok(Self {
            input: a.input,
            output: a.output,
            mode: a.mode,
            seed_column: a.seed_column,
            source: a.source,
            target: a.target,
            measures,
            estimator,
            k: a.k,
            l: a.l,
            tau: a.tau,
            max_window: a.max_window,
            knn: a.knn,
            kernel_width: a.kernel_width,
            di_mode,
            noise_seed: a.noise_seed,
            format: a.format,
        })
    }
}

impl RunConfig {
    /// Request for one (measure, source, target) with the configured parameters.
    pub fn request(&self, measure: MeasureId, source: Option<&str>, target: &str) -> MeasureRequest {
        let req = match source {
            Some(s) => MeasureRequest::pair(measure, s, target),
            None => MeasureRequest::single(measure, target),
        };
        let estimator = self
            .estimator
            .unwrap_or_else(|| measure.default_estimator())
            .with_params(self.knn, self.kernel_width);
        req.with_estimator(estimator)
            .with_memory(self.k, self.l)
            .with_lags(self.tau, self.tau)
            .with_window(self.max_window, self.di_mode)
            .with_noise_seed(self.noise_seed)
    }
}
