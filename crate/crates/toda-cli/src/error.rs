use thiserror::Error;
use toda_core::TodaError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("report does not contain series `{0}`")]
    MissingSeries(String),
    #[error(transparent)]
    Core(#[from] TodaError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv encoding failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// `2` for anything the caller can fix by changing the invocation, `1` otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigInvalid(_) | CliError::MissingSeries(_) | CliError::Io(_) => 2,
            CliError::Core(TodaError::ConfigInvalid(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
