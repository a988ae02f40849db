//! Experiment harness for relative-entropy regularized ERM: config parsing,
//! instance generation, λ sweeps and reports.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod instance;
pub mod sweep;
pub mod verify;

pub use config::ExperimentConfig;
pub use dataset::{ingest_csv_dataset, write_csv_dataset};
pub use error::{ExpError, Result};
pub use instance::{generate_instance, Instance};
pub use sweep::{emit_csv, render_csv, run_sweep, Metrics, SweepRecord, CSV_HEADER};
