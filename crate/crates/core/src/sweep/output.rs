use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::result::{Aggregates, SweepResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// From a file extension; anything but `.json` means CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

pub const CSV_COLUMNS: [&str; 10] = [
    "density",
    "realized_density",
    "metric",
    "value",
    "std_error",
    "depth_or_beta",
    "n",
    "k",
    "instances",
    "seed",
];

/// One long-format row per (point, metric, depth or beta).
#[derive(Debug, Serialize)]
struct CsvRow {
    density: f64,
    realized_density: f64,
    metric: &'static str,
    value: f64,
    std_error: Option<f64>,
    depth_or_beta: Option<f64>,
    n: usize,
    k: usize,
    instances: usize,
    seed: u64,
}

fn csv_rows(result: &SweepResult) -> Vec<CsvRow> {
    let cfg = &result.metadata.config;
    let mut rows = Vec::new();
    for (i, point) in result.points.iter().enumerate() {
        let mut push = |metric: &'static str, value: f64, std_error: Option<f64>, depth_or_beta: Option<f64>| {
            rows.push(CsvRow {
                density: point.nominal_density,
                realized_density: point.realized_density.value(),
                metric,
                value,
                std_error,
                depth_or_beta,
                n: cfg.n,
                k: cfg.k,
                instances: point.records.len(),
                seed: cfg.seed,
            })
        };
        match &point.aggregates {
            Aggregates::Decision(a) => {
                if let Some(p) = a.sat_fraction {
                    push("sat_fraction", p, a.sat_fraction_std_error, None);
                }
                push("sat_fraction_lower", a.sat_fraction_lower, None, None);
                push("sat_fraction_upper", a.sat_fraction_upper, None, None);
                push("censored", a.censored as f64, None, None);
                if let Some(e) = a.decisions {
                    push("mean_decisions", e.mean, e.std_error, None);
                }
                if let Some(m) = a.median_decisions {
                    push("median_decisions", m, None, None);
                }
                if let Some(e) = a.propagations {
                    push("mean_propagations", e.mean, e.std_error, None);
                }
            }
            Aggregates::Gibbs(a) => {
                if let Some(f) = a.satisfiable_fraction {
                    push("satisfiable_fraction", f, None, None);
                }
                for b in &a.per_beta {
                    if let Some(e) = b.exact {
                        push("p_ground_exact", e.mean, e.std_error, Some(b.beta));
                    }
                    if let Some(m) = &b.mcmc {
                        push("p_ground_mcmc", m.estimate.mean, m.estimate.std_error, Some(b.beta));
                        push("p_ground_mcmc_sampling_error", m.sampling_error, None, Some(b.beta));
                    }
                }
            }
            Aggregates::Qaoa(a) => {
                if let Some(f) = a.satisfiable_fraction {
                    push("satisfiable_fraction", f, None, None);
                }
                for d in &a.per_depth {
                    let depth = Some(d.depth as f64);
                    if let Some(e) = d.error {
                        push("qaoa_error", e.mean, e.std_error, depth);
                    }
                    push("qaoa_expectation", d.expectation.mean, d.expectation.std_error, depth);
                    push("budget_hits", d.budget_hits as f64, None, depth);
                }
            }
        }
        if let Some(t) = result.timing.points.get(i) {
            push("mean_wall_seconds", t.mean_seconds, None, None);
            push("median_wall_seconds", t.median_seconds, None, None);
        }
    }
    rows
}

/// Writes `result` as long-format CSV or as JSON. A CSV of an empty sweep is
/// just the header.
pub fn write_results(result: &SweepResult, path: &Path, format: OutputFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, result).map_err(|source| Error::Json {
                path: path.to_path_buf(),
                source,
            })?;
            out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        }
        OutputFormat::Csv => {
            let csv_err = |source| Error::Csv {
                path: path.to_path_buf(),
                source,
            };
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
            w.write_record(CSV_COLUMNS).map_err(csv_err)?;
            for row in csv_rows(result) {
                w.serialize(row).map_err(csv_err)?;
            }
            w.flush().map_err(|e| Error::io(path, e))?;
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads a JSON result and checks that its aggregates recompute from its
/// records.
pub fn load_results(path: &Path) -> Result<SweepResult> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let result: SweepResult = serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    result.verify_aggregates()?;
    Ok(result)
}
