#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use tsinfo_core::Dataset;

/// Writes a dataset as CSV with full round-trip precision.
pub fn write_dataset(path: &Path, data: &Dataset) {
    let mut text = data.names().collect::<Vec<_>>().join(",");
    text.push('\n');
    for t in 0..data.len() {
        let row: Vec<String> = data.columns().iter().map(|c| format!("{:?}", c.values()[t])).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

pub fn tsinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsinfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Data rows of a CSV result file, split into fields (header comment and
/// column header skipped).
pub fn result_rows(text: &str) -> Vec<Vec<String>> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let mut rdr = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    rdr.records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}
