//! Subcommand handlers behind the `eqlearn` binary.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{
    emit_results, overlay_bounds, parse_results_csv, run_correlation_sweep, run_energy_sweep,
    write_overlay, ExperimentConfig,
};
use crate::models::{sample_params, ModelConfig};
use crate::quantum::{solve_model, LanczosOptions};
use crate::shadows::{measure_shadow, shadow_count, ShadowRecord, DEFAULT_SHADOW_CONSTANT};
use crate::theory::{error_bound_power_law, BoundForm, CurveKind};

#[derive(Debug, Parser)]
#[command(name = "eqlearn", version, about = "Equivariant ground-state learning experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; replaces the seed list of sweep configs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy-density scaling sweep.
    SweepEnergy,
    /// Two-point correlation scaling sweep.
    SweepCorrelations,
    /// ω and the power-law error bound over a range of sizes.
    Theory,
    /// Fit a bound curve to a results CSV.
    FitBounds,
    /// Measure and store a classical-shadow record of one ground state.
    ShadowCache,
}

fn load_json<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Settings for `theory`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoryConfig {
    /// Exponent as `"p"` or `"p/q"`.
    pub alpha: String,
    pub dimension: u32,
    pub locality: u32,
    pub c: f64,
    pub min_log2_n: u32,
    pub max_log2_n: u32,
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig {
            alpha: "3".into(),
            dimension: 1,
            locality: 2,
            c: 1.0,
            min_log2_n: 4,
            max_log2_n: 30,
        }
    }
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Config(format!("cannot parse {s:?} as a rational"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Settings for `fit-bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub input: PathBuf,
    pub curve: CurveKind,
    #[serde(default)]
    pub distance: Option<usize>,
}

/// Settings for `shadow-cache`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowCacheConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub snapshots: Option<usize>,
    #[serde(default)]
    pub constant: Option<f64>,
    #[serde(default)]
    pub lanczos: LanczosOptions,
}

/// Stored record with the parameter point it was measured at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowCache {
    pub model: ModelConfig,
    pub params: Vec<f64>,
    pub energy: f64,
    pub record: ShadowRecord,
}

fn sweep_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        None => ExperimentConfig::default(),
        Some(p) => ExperimentConfig::load(p)?,
    };
    if let Some(s) = common.seed {
        cfg.seeds = vec![s];
    }
    cfg.validate()?;
    Ok(cfg)
}

fn theory(common: &Common) -> Result<serde_json::Value> {
    let cfg: TheoryConfig = load_json(common.config.as_deref())?;
    if cfg.min_log2_n > cfg.max_log2_n || cfg.max_log2_n > 60 {
        return Err(Error::Config("size range must satisfy min <= max <= 60".into()));
    }
    let exact = crate::theory::compute_omega_rational(parse_ratio(&cfg.alpha)?, cfg.dimension, cfg.locality)?;
    let omega = exact.to_f64().omega;
    ensure_dir(&common.out)?;
    let csv_path = common.out.join("theory.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(["n", "epsilon_exact", "epsilon_asymptotic"])?;
    for k in cfg.min_log2_n..=cfg.max_log2_n {
        let n = 2f64.powi(k as i32);
        let e = error_bound_power_law(n, omega, cfg.c, BoundForm::Exact)?;
        let a = match error_bound_power_law(n, omega, cfg.c, BoundForm::Asymptotic) {
            Ok(v) => v.to_string(),
            Err(Error::Domain(_)) => String::new(),
            Err(err) => return Err(err),
        };
        w.write_record([format!("{}", 1u64 << k), e.to_string(), a])?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;
    let json_path = common.out.join("theory.json");
    write_json(
        &json_path,
        &serde_json::json!({
            "config": cfg,
            "omega_exact": exact.omega.to_string(),
            "params": exact.to_f64(),
        }),
    )?;
    Ok(serde_json::json!({ "csv": csv_path, "json": json_path, "omega": exact.omega.to_string() }))
}

fn fit_bounds(common: &Common) -> Result<serde_json::Value> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("fit-bounds needs --config".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cfg: FitConfig = serde_json::from_str(&text)?;
    let rows = parse_results_csv(&cfg.input)?;
    let (fit, table) = overlay_bounds(&rows, cfg.curve, cfg.distance)?;
    ensure_dir(&common.out)?;
    let csv_path = common.out.join("overlay.csv");
    write_overlay(&csv_path, &table)?;
    let json_path = common.out.join("fit.json");
    write_json(&json_path, &serde_json::json!({ "config": cfg, "fit": fit }))?;
    Ok(serde_json::json!({ "csv": csv_path, "json": json_path, "fit": fit }))
}

fn shadow_cache(common: &Common) -> Result<serde_json::Value> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("shadow-cache needs --config".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg: ShadowCacheConfig = serde_json::from_str(&text)?;
    if let Some(s) = common.seed {
        cfg.model.seed = s;
    }
    let spec = cfg.model.build()?;
    let seed = cfg.model.seed;
    let x = sample_params(&spec, seed);
    let gs = solve_model(&spec, &x, &cfg.lanczos.with_seed(seed))?;
    let t = cfg.snapshots.unwrap_or_else(|| {
        shadow_count(spec.n, cfg.constant.unwrap_or(DEFAULT_SHADOW_CONSTANT))
    });
    let record = measure_shadow(&gs.state, t, seed)?;
    ensure_dir(&common.out)?;
    let out = common
        .out
        .join(format!("shadow_{}_n{}_seed{seed}.json", spec.family.tag(), spec.n));
    write_json(
        &out,
        &ShadowCache { model: cfg.model, params: x, energy: gs.energy, record },
    )?;
    Ok(serde_json::json!({ "json": out, "snapshots": t }))
}

/// Run one parsed command, returning a JSON summary for stdout.
pub fn run(cli: &Cli) -> Result<serde_json::Value> {
    let common = &cli.common;
    match cli.command {
        Command::SweepEnergy | Command::SweepCorrelations => {
            let cfg = sweep_config(common)?;
            let (result, stem) = match cli.command {
                Command::SweepEnergy => (run_energy_sweep(&cfg)?, "energy"),
                _ => (run_correlation_sweep(&cfg)?, "correlations"),
            };
            let (csv, json) = emit_results(&result, &common.out, stem)?;
            Ok(serde_json::json!({ "csv": csv, "json": json, "rows": result.rows.len() }))
        }
        Command::Theory => theory(common),
        Command::FitBounds => fit_bounds(common),
        Command::ShadowCache => shadow_cache(common),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

/// Parse `args`, run, and report. Success prints a JSON summary on stdout;
/// failure prints `{"error": .., "message": ..}` on stderr. Returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return 2;
        }
    };
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            1
        }
    }
}
