//! Experiment runner for `logkdv-core`: configuration, validation, and
//! deterministic CSV/JSON output with a manifest.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod figures;
pub mod output;

pub use commands::run;
pub use config::{defaults, resolve, Command, ConfigPatch, DataKind, ExperimentConfig, DEFAULTS_VERSION, OUTPUT_DIR_ENV};
pub use error::{LabError, Result};
pub use figures::{run_figures, Figure};
