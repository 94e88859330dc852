//! Planning and evaluating the (source, target, measure) grid.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use tsinfo_core::measures::{compute, MeasureId};
use tsinfo_core::{standardize, Dataset, Error};

use crate::config::{Mode, RunConfig};

/// One cell of the sweep. Single-process measures carry no source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub measure: MeasureId,
    pub source: Option<String>,
    pub target: String,
}

/// Enumerates the tasks of a run over the given column names.
///
/// Directed measures cover ordered pairs, undirected ones each unordered
/// pair once (earlier header column as source), and single-process measures
/// every column.
pub fn plan(config: &RunConfig, names: &[String]) -> Result<Vec<Task>, String> {
    let check = |name: &str| {
        if names.iter().any(|n| n == name) {
            Ok(())
        } else {
            Err(format!("no column named `{name}` in the input"))
        }
    };
    let mut tasks = Vec::new();
    for &measure in &config.measures {
        let single = |t: &String| Task {
            measure,
            source: None,
            target: t.clone(),
        };
        let pair = |s: &String, t: &String| Task {
            measure,
            source: Some(s.clone()),
            target: t.clone(),
        };
        match config.mode {
            Mode::Single => {
                let source = config.source.clone().unwrap_or_else(|| names[0].clone());
                let target = config
                    .target
                    .clone()
                    .unwrap_or_else(|| names.get(1).unwrap_or(&names[0]).clone());
                check(&source)?;
                check(&target)?;
                tasks.push(if measure.is_single_process() {
                    single(&target)
                } else {
                    pair(&source, &target)
                });
            }
            _ if measure.is_single_process() => tasks.extend(names.iter().map(single)),
            Mode::Pairwise => {
                for (i, s) in names.iter().enumerate() {
                    for (j, t) in names.iter().enumerate() {
                        if i != j && (measure.is_directed() || i < j) {
                            tasks.push(pair(s, t));
                        }
                    }
                }
            }
            Mode::Seed => {
                let seed = config.seed_column.as_deref().expect("validated in RunConfig");
                check(seed)?;
                let seed = seed.to_string();
                tasks.extend(names.iter().filter(|t| **t != seed).map(|t| pair(&seed, t)));
            }
        }
    }
    Ok(tasks)
}

/// One output row; `error` is set instead of `value` when the pair failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub source: String,
    pub target: String,
    pub measure: MeasureId,
    pub estimator: String,
    pub value_nats: Option<f64>,
    pub n_eff: Option<usize>,
    pub params: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Smallest and largest value of one measure across the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremes {
    pub measure: MeasureId,
    pub computed: usize,
    pub failed: usize,
    pub min: Option<Extreme>,
    pub max: Option<Extreme>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extreme {
    pub source: String,
    pub target: String,
    pub value_nats: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<Extremes>,
}

impl Report {
    pub fn computed(&self) -> usize {
        self.rows.iter().filter(|r| r.value_nats.is_some()).count()
    }
}

/// Standardizes every column, then evaluates all tasks in parallel.
///
/// Columns that cannot be standardized stay in the dataset unchanged; every
/// task touching them reports the standardization error.
pub fn run(config: &RunConfig, dataset: &Dataset, tasks: &[Task]) -> Report {
    let mut failed: BTreeMap<String, Error> = BTreeMap::new();
    let mut columns = Vec::with_capacity(dataset.width());
    for c in dataset.columns() {
        match standardize(c) {
            Ok(s) => columns.push(s),
            Err(e) => {
                failed.insert(c.name().to_string(), e);
                columns.push(c.clone());
            }
        }
    }
    let prepared = Dataset::new(columns).expect("same names and lengths as the input");

    let mut rows: Vec<ResultRow> = tasks
        .par_iter()
        .map(|task| evaluate(config, &prepared, &failed, task))
        .collect();
    rows.sort_by(|a, b| {
        (&a.source, &a.target, a.measure.as_str()).cmp(&(&b.source, &b.target, b.measure.as_str()))
    });
    let summary = summarize(config, &rows);
    Report { rows, summary }
}

fn evaluate(config: &RunConfig, data: &Dataset, failed: &BTreeMap<String, Error>, task: &Task) -> ResultRow {
    let req = config.request(task.measure, task.source.as_deref(), &task.target);
    let mut params: Vec<String> = req.params().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
    let pre_error = std::iter::once(&task.target)
        .chain(task.source.as_ref())
        .find_map(|name| failed.get(name).cloned());
    let outcome = match pre_error {
        Some(e) => Err(e),
        None => compute(data, &req),
    };
    let (value_nats, n_eff, error, message) = match outcome {
        Ok(r) => (Some(r.value), Some(r.n_eff), None, None),
        Err(e) => {
            params.push(format!("error={}", e.code()));
            (None, None, Some(e.code().to_string()), Some(e.to_string()))
        }
    };
    ResultRow {
        source: task.source.clone().unwrap_or_default(),
        target: task.target.clone(),
        measure: task.measure,
        estimator: req.effective_estimator().name().to_string(),
        value_nats,
        n_eff,
        params: params.join(";"),
        error,
        message,
    }
}

fn summarize(config: &RunConfig, rows: &[ResultRow]) -> Vec<Extremes> {
    config
        .measures
        .iter()
        .map(|&measure| {
            let mine: Vec<&ResultRow> = rows.iter().filter(|r| r.measure == measure).collect();
            let ok: Vec<(&ResultRow, f64)> = mine.iter().filter_map(|r| r.value_nats.map(|v| (*r, v))).collect();
            let extreme = |(r, v): (&ResultRow, f64)| Extreme {
                source: r.source.clone(),
                target: r.target.clone(),
                value_nats: v,
            };
            // Rows are sorted, so ties resolve to the first row in output order.
            let min = ok.iter().copied().reduce(|a, b| if b.1 < a.1 { b } else { a });
            let max = ok.iter().copied().reduce(|a, b| if b.1 > a.1 { b } else { a });
            Extremes {
                measure,
                computed: ok.len(),
                failed: mine.len() - ok.len(),
                min: min.map(extreme),
                max: max.map(extreme),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Args;
    use clap::Parser;
    use tsinfo_core::TimeSeries;

    fn config(extra: &[&str]) -> RunConfig {
        let mut argv = vec!["tsinfo", "--input", "in.csv"];
        argv.extend_from_slice(extra);
        RunConfig::try_from(Args::try_parse_from(argv).unwrap()).unwrap()
    }

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn data() -> Dataset {
        let col = |name: &str, f: fn(usize) -> f64| TimeSeries::new(name, (0..300).map(f).collect()).unwrap();
        Dataset::new(vec![
            col("a", |i| ((i * 37 % 101) as f64).sin()),
            col("b", |i| ((i * 53 % 97) as f64).cos()),
            col("c", |i| ((i * 11 % 89) as f64).sin() * 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn pairwise_counts() {
        let n = names(&["a", "b", "c"]);
        assert_eq!(plan(&config(&["--measures", "te"]), &n).unwrap().len(), 6);
        assert_eq!(plan(&config(&["--measures", "mi"]), &n).unwrap().len(), 3);
        assert_eq!(plan(&config(&["--measures", "ais"]), &n).unwrap().len(), 3);
        assert_eq!(plan(&config(&["--measures", "te,si,h"]), &n).unwrap().len(), 12);
    }

    #[test]
    fn seed_fixes_source() {
        let c = config(&["--mode", "seed", "--seed-column", "b", "--measures", "te,mi"]);
        let tasks = plan(&c, &names(&["a", "b", "c"])).unwrap();
        assert_eq!(tasks.len(), 4);
        assert!(tasks.iter().all(|t| t.source.as_deref() == Some("b") && t.target != "b"));
        let bad = config(&["--mode", "seed", "--seed-column", "z"]);
        assert!(plan(&bad, &names(&["a", "b"])).is_err());
    }

    #[test]
    fn single_defaults_to_first_two_columns() {
        let tasks = plan(&config(&["--mode", "single", "--measures", "te,ais"]), &names(&["a", "b", "c"])).unwrap();
        assert_eq!(tasks[0].source.as_deref(), Some("a"));
        assert_eq!(tasks[0].target, "b");
        assert_eq!(tasks[1].source, None);
    }

    #[test]
    fn rows_are_sorted_and_parallel_matches_serial() {
        let c = config(&["--measures", "te,mi,h", "--estimator", "gaussian"]);
        let d = data();
        let tasks = plan(&c, &names(&["a", "b", "c"])).unwrap();
        let report = run(&c, &d, &tasks);
        let keys: Vec<_> = report
            .rows
            .iter()
            .map(|r| (r.source.clone(), r.target.clone(), r.measure.as_str()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        assert_eq!(serial.install(|| run(&c, &d, &tasks)), report);
    }

    #[test]
    fn bad_column_does_not_stop_the_sweep() {
        let d = data().replace(TimeSeries::new("c", vec![2.0; 300]).unwrap()).unwrap();
        let c = config(&["--measures", "te", "--estimator", "gaussian"]);
        let report = run(&c, &d, &plan(&c, &names(&["a", "b", "c"])).unwrap());
        assert_eq!(report.rows.len(), 6);
        assert_eq!(report.computed(), 2);
        for r in report.rows.iter().filter(|r| r.source == "c" || r.target == "c") {
            assert_eq!(r.error.as_deref(), Some("zero_variance"));
            assert!(r.params.ends_with("error=zero_variance"));
        }
        assert_eq!(report.summary[0].failed, 4);
    }
}
