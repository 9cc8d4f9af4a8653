use thiserror::Error;

/// User-facing failures, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Schema or admissibility violation in a config.
    #[error("config error: {0}")]
    Config(String),

    /// Missing or unreadable input files.
    #[error("input error: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// The numerics failed on an otherwise valid run.
    #[error("run failed: {0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Run(_) => 2,
            _ => 1,
        }
    }
}

impl From<dnls_core::Error> for CliError {
    fn from(e: dnls_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}
