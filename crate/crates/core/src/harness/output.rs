use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::sweep::{ResultRow, SweepResult};
use crate::theory::{fit_bound, BoundFit, CurveKind};

pub const CSV_HEADER: [&str; 9] = [
    "family",
    "n",
    "seed",
    "target",
    "distance",
    "ml_rmse",
    "trivial_rmse",
    "test_std",
    "wall_ms",
];

#[derive(Debug, Serialize)]
struct Summary {
    n: usize,
    distance: Option<usize>,
    median_ml_rmse: f64,
    median_trivial_rmse: f64,
    median_test_std: f64,
}

#[derive(Debug, Serialize)]
struct Companion<'a> {
    csv: String,
    version: &'static str,
    config_hash: String,
    total_wall_ms: f64,
    config: &'a crate::harness::ExperimentConfig,
    summary: Vec<Summary>,
    cells: &'a [crate::harness::CellMeta],
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Write `<dir>/<stem>.csv` and the companion `<dir>/<stem>.json` holding
/// the config, per-size medians and per-cell timings.
pub fn emit_results(result: &SweepResult, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));

    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            r.family.clone(),
            r.n.to_string(),
            r.seed.to_string(),
            r.target.clone(),
            opt(r.distance),
            r.ml_rmse.to_string(),
            r.trivial_rmse.to_string(),
            r.test_std.to_string(),
            opt(r.wall_ms),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let summary = result
        .groups()
        .into_iter()
        .map(|(n, d)| Summary {
            n,
            distance: d,
            median_ml_rmse: result.median_ml_rmse(n, d).unwrap_or(f64::NAN),
            median_trivial_rmse: result.median_trivial_rmse(n, d).unwrap_or(f64::NAN),
            median_test_std: result.median_test_std(n, d).unwrap_or(f64::NAN),
        })
        .collect();
    let config_json = serde_json::to_string(&result.config)?;
    let companion = Companion {
        csv: csv_path.display().to_string(),
        version: env!("CARGO_PKG_VERSION"),
        config_hash: format!("{:016x}", crate::learn::stable_hash(config_json)),
        total_wall_ms: result.cells.iter().map(|c| c.wall_ms).sum(),
        config: &result.config,
        summary,
        cells: &result.cells,
    };
    let text = serde_json::to_string_pretty(&companion)?;
    std::fs::write(&json_path, text).map_err(|e| Error::io(&json_path, e))?;
    Ok((csv_path, json_path))
}

fn parse_field<T: std::str::FromStr>(field: &str, name: &str, line: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Config(format!("row {line}: bad {name} value {field:?}")))
}

fn parse_opt<T: std::str::FromStr>(field: &str, name: &str, line: usize) -> Result<Option<T>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_field(field, name, line).map(Some)
    }
}

/// Read back a CSV written by [`emit_results`].
pub fn parse_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        rows.push(ResultRow {
            family: rec[0].to_string(),
            n: parse_field(&rec[1], "n", line)?,
            seed: parse_field(&rec[2], "seed", line)?,
            target: rec[3].to_string(),
            distance: parse_opt(&rec[4], "distance", line)?,
            ml_rmse: parse_field(&rec[5], "ml_rmse", line)?,
            trivial_rmse: parse_field(&rec[6], "trivial_rmse", line)?,
            test_std: parse_field(&rec[7], "test_std", line)?,
            wall_ms: parse_opt(&rec[8], "wall_ms", line)?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlayRow {
    pub n: usize,
    /// Seed-averaged ML RMSE.
    pub measured: f64,
    pub fitted_bound: f64,
}

/// Fit `kind` to the seed-averaged ML RMSE of the rows at `distance` and
/// tabulate measured against fitted values.
pub fn overlay_bounds(
    rows: &[ResultRow],
    kind: CurveKind,
    distance: Option<usize>,
) -> Result<(BoundFit, Vec<OverlayRow>)> {
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.distance == distance) {
        by_n.entry(r.n).or_default().push(r.ml_rmse);
    }
    if by_n.is_empty() {
        return Err(Error::Fit(format!("no rows at distance {distance:?}")));
    }
    let sizes: Vec<f64> = by_n.keys().map(|&n| n as f64).collect();
    let measured: Vec<f64> = by_n
        .values()
        .map(|v| v.iter().sum::<f64>() / v.len() as f64)
        .collect();
    let fit = fit_bound(&sizes, &measured, kind)?;
    let table = by_n
        .keys()
        .zip(&measured)
        .map(|(&n, &m)| {
            Ok(OverlayRow {
                n,
                measured: m,
                fitted_bound: fit.curve.evaluate(n as f64)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok((fit, table))
}

pub fn write_overlay(path: &Path, rows: &[OverlayRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "measured", "fitted_bound"])?;
    for r in rows {
        w.write_record([r.n.to_string(), r.measured.to_string(), r.fitted_bound.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
