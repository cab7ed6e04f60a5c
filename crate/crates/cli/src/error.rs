use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("boundary data rejected: {0}")]
    Validation(sonic_core::Error),
    #[error("solver failed: {0}")]
    Solver(sonic_core::Error),
    #[error("no convergence after {iterations} sweeps (last distance {distance:e})")]
    NotConverged { iterations: usize, distance: f64 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 configuration or IO, 2 boundary validation, 3 solver, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Solver(_) | CliError::NotConverged { .. } => 3,
            CliError::Verification(_) => 4,
        }
    }

    /// Route a core error raised while preparing boundary data.
    pub fn from_boundary(e: sonic_core::Error) -> Self {
        use sonic_core::Error as E;
        match e {
            E::InvalidInput(msg) => CliError::Config(msg),
            E::OutOfRange { .. } | E::TooFewNodes { .. } => CliError::Config(e.to_string()),
            other => CliError::Validation(other),
        }
    }
}
