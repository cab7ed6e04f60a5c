//! Batch driver for `sonic-core`: TOML run configurations, orchestration of
//! the Euler, Tricomi and verification pipelines, and CSV/JSON output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Kind, Overrides, RunConfig};
pub use error::CliError;
pub use run::{run, Outcome};

/// Size the global rayon pool from `SONIC_THREADS` when it is set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SONIC_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("SONIC_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}
