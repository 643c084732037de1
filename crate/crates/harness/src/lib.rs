//! Experiment orchestration for `qperc`: configuration, per-trial
//! pipelines, long-format CSV output, summaries, plot scripts and the
//! acceptance suite.

pub mod acceptance;
pub mod config;
pub mod plot;
pub mod run;
pub mod summary;

pub use config::{ConfigError, Density, ExperimentConfig, Kind};
pub use run::{run, run_to_csv, run_to_file, ExperimentRecord, RunError, CSV_COLUMNS};
pub use summary::{summarize_csv, summarize_values, SummaryStats};
