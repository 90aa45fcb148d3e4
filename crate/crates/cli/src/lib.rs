//! Experiment driver for the `pointspec` command: configuration, the six
//! experiments, and CSV/JSON/SVG writers.

pub mod config;
pub mod emit;
pub mod error;
pub mod experiments;
pub mod svg;
pub mod table;

use std::path::PathBuf;

pub use config::{Cli, ExperimentConfig};
pub use error::CliError;
pub use table::ResultTable;

/// Runs the experiment and writes its table in every configured format.
pub fn run(cfg: &ExperimentConfig) -> Result<(ResultTable, Vec<PathBuf>), CliError> {
    let table = experiments::run_experiment(cfg)?;
    let written = emit::emit(&table, &cfg.formats, &cfg.out_dir)?;
    Ok((table, written))
}
