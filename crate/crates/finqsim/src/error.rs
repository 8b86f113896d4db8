use thiserror::Error;

/// Exit code for malformed input, configuration or paths.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit code for numeric-domain failures inside the models.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config {origin}: {reason}")]
    Config { origin: String, reason: String },

    #[error("config {origin}: unknown keys {keys:?}")]
    UnknownKeys { origin: String, keys: Vec<String> },

    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("cannot write {path}: {reason}")]
    Write { path: String, reason: String },

    #[error("{what}: non-finite values at indices {indices:?}")]
    NonFinite { what: String, indices: Vec<usize> },

    #[error(transparent)]
    Model(#[from] finqsim_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::NonFinite { .. } => EXIT_NUMERIC,
            _ => EXIT_VALIDATION,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
