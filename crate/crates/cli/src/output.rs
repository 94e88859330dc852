//! Long-format CSV / JSON output and the metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tsinfo_core::estimators::{DEFAULT_KERNEL_WIDTH, DEFAULT_K_NN, DEFAULT_TIE_NOISE};
use tsinfo_core::measures::DiMode;

use crate::config::RunConfig;
use crate::sweep::{Extremes, Report};

pub const COLUMNS: [&str; 7] = ["source", "target", "measure", "estimator", "value_nats", "n_eff", "params"];

/// Reproducibility record written next to the results.
#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub units: &'static str,
    pub standardization: &'static str,
    pub default_knn: usize,
    pub default_kernel_width: f64,
    pub tie_noise_amplitude_sd: f64,
    pub rows: usize,
    pub failed_rows: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<&'static str>,
    pub summary: &'a [Extremes],
}

impl<'a> Metadata<'a> {
    pub fn new(config: &'a RunConfig, report: &'a Report) -> Self {
        let mut notes = Vec::new();
        if config.di_mode == DiMode::PooledApprox {
            notes.push(
                "directed_information k=0 term is the contemporaneous MI (pooled block entropy \
                 minus conditional entropy); dropping it instead would lower each value by that term",
            );
        }
        Self {
            tool: "tsinfo",
            version: env!("CARGO_PKG_VERSION"),
            config,
            units: "nats",
            standardization: "per_column",
            default_knn: DEFAULT_K_NN,
            default_kernel_width: DEFAULT_KERNEL_WIDTH,
            tie_noise_amplitude_sd: DEFAULT_TIE_NOISE,
            rows: report.rows.len(),
            failed_rows: report.rows.len() - report.computed(),
            notes,
            summary: &report.summary,
        }
    }
}

/// Sidecar path: `<output>.meta.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_csv<W: Write>(out: W, config: &RunConfig, report: &Report) -> std::io::Result<()> {
    let mut out = out;
    writeln!(
        out,
        "# tsinfo {} mode={} noise_seed={} standardization=per_column units=nats",
        env!("CARGO_PKG_VERSION"),
        serde_json::to_value(config.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        config.noise_seed
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in &report.rows {
        w.write_record([
            r.source.as_str(),
            &r.target,
            r.measure.as_str(),
            &r.estimator,
            &r.value_nats.map(|v| v.to_string()).unwrap_or_default(),
            &r.n_eff.map(|n| n.to_string()).unwrap_or_default(),
            &r.params,
        ])?;
    }
    w.flush()
}

pub fn write_json<W: Write>(mut out: W, config: &RunConfig, report: &Report) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Doc<'a> {
        metadata: Metadata<'a>,
        rows: &'a [crate::sweep::ResultRow],
    }
    let doc = Doc {
        metadata: Metadata::new(config, report),
        rows: &report.rows,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

/// Human-readable min/max lines.
pub fn summary_lines(report: &Report) -> Vec<String> {
    report
        .summary
        .iter()
        .map(|s| match (&s.min, &s.max) {
            (Some(lo), Some(hi)) => format!(
                "{}: {} computed, {} failed; min {:.6} ({} -> {}), max {:.6} ({} -> {})",
                s.measure, s.computed, s.failed, lo.value_nats, lo.source, lo.target, hi.value_nats, hi.source, hi.target
            ),
            _ => format!("{}: 0 computed, {} failed", s.measure, s.failed),
        })
        .collect()
}
