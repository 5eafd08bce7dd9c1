//! Grid sweeps, report and mesh exporters, and the `lightlike` command-line
//! tool on top of `lightlike-core`.

pub mod catalog;
pub mod config;
pub mod error;
pub mod export;
pub mod sweep;
pub mod verify;

pub use config::{parse_config, AnalysisConfig};
pub use error::CliError;
pub use sweep::{run_sweep, NodeReport, Report, Summary};

/// Overrides the output directory of `analyze` and `verify`.
pub const OUTPUT_DIR_ENV: &str = "LIGHTLIKE_OUTPUT_DIR";
/// Overrides the number of worker threads.
pub const THREADS_ENV: &str = "LIGHTLIKE_THREADS";
