use std::fmt;

/// Failures surfaced by the command-line layer, each mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-range configuration.
    Validation(String),
    /// Per-node failures above the configured threshold.
    Runtime(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Runtime(m) => write!(f, "analysis failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
