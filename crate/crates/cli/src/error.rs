use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Core(#[from] secsel_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Verification(String),
    #[error("{0} numeric failure(s) during the sweep; see the warnings above")]
    PartialSweep(usize),
}

impl CliError {
    /// 1 usage, 2 numeric failure, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        use secsel_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => 1,
            CliError::Core(E::InvalidParameter { .. } | E::RateSeparation { .. } | E::McConfig(_)) => 1,
            CliError::Core(_) | CliError::PartialSweep(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}
