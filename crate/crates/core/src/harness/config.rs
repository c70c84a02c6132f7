use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::learn::LearnerConfig;
use crate::models::{build_family, Family, ModelSpec, SlotKind};
use crate::quantum::{LanczosOptions, DEFAULT_QUBIT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `H/√n`
    Energy,
    /// Every `C_ij`, reported per ring distance.
    AllCorrelations,
}

impl Target {
    pub fn tag(&self) -> &'static str {
        match self {
            Target::Energy => "energy",
            Target::AllCorrelations => "all_correlations",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceConfig {
    Exact,
    /// Classical shadow of the training state with `snapshots` samples, or
    /// `⌈constant·log₂ n⌉` when `snapshots` is absent.
    Shadow {
        #[serde(default)]
        constant: Option<f64>,
        #[serde(default)]
        snapshots: Option<usize>,
    },
}

impl SourceConfig {
    pub fn tag(&self) -> &'static str {
        match self {
            SourceConfig::Exact => "exact",
            SourceConfig::Shadow { .. } => "shadow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub family: Family,
    pub alpha: Option<f64>,
    pub ranges: Vec<(SlotKind, (f64, f64))>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub target: Target,
    pub source: SourceConfig,
    pub learner: LearnerConfig,
    pub test_points: usize,
    pub include_reflections: bool,
    pub lanczos: LanczosOptions,
    /// Largest fraction of test points that may be skipped as degenerate.
    pub max_skip_fraction: f64,
    /// Write measured wall time into the CSV. Off by default so reruns
    /// produce identical files.
    pub timing_in_csv: bool,
    /// Worker threads for independent `(n, seed)` cells; 0 uses the
    /// global pool.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: Family::Heisenberg,
            alpha: None,
            ranges: Vec::new(),
            sizes: vec![6, 8, 10, 12],
            seeds: vec![0, 1, 2, 3, 4],
            target: Target::Energy,
            source: SourceConfig::Exact,
            learner: LearnerConfig::default(),
            test_points: 20,
            include_reflections: true,
            lanczos: LanczosOptions::default(),
            max_skip_fraction: 0.2,
            timing_in_csv: false,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("no system sizes".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| !(3..=DEFAULT_QUBIT_CAP).contains(&n)) {
            return Err(Error::Config(format!(
                "size {n} outside the solver range 3..={DEFAULT_QUBIT_CAP}"
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("no seeds".into()));
        }
        if self.test_points < 2 {
            return Err(Error::Config(format!(
                "need at least 2 test points, got {}",
                self.test_points
            )));
        }
        if !(0.0..=1.0).contains(&self.max_skip_fraction) {
            return Err(Error::Config("max_skip_fraction must lie in [0, 1]".into()));
        }
        if let SourceConfig::Shadow { constant, snapshots } = self.source {
            if snapshots == Some(0) || constant.is_some_and(|c| !(c > 0.0)) {
                return Err(Error::Config("shadow source needs a positive snapshot count".into()));
            }
        }
        Ok(())
    }

    pub fn model(&self, n: usize) -> Result<ModelSpec> {
        build_family(self.family, n, self.alpha, &self.ranges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
