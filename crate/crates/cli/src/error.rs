use envelope_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Config(_) => 2,
            CliError::Core(CoreError::NoBoundState { .. }) => 3,
            CliError::Core(CoreError::NonConvergence(_)) => 4,
            CliError::Core(CoreError::MixedQ0) => 5,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
