//! Scaling sweeps over system size with the trivial-predictor and
//! test-spread baselines, CSV/JSON emission and bound overlays.

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{ExperimentConfig, SourceConfig, Target};
pub use output::{emit_results, overlay_bounds, parse_results_csv, write_overlay, OverlayRow, CSV_HEADER};
pub use sweep::{run_correlation_sweep, run_energy_sweep, run_sweep, CellMeta, ResultRow, SweepResult};
