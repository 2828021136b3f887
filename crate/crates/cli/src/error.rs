use thiserror::Error;

/// Failures, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("degenerate field: {0}")]
    Degenerate(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<g2contact::Error> for CliError {
    fn from(e: g2contact::Error) -> Self {
        use g2contact::Error as E;
        match e {
            E::VanishingField { .. } | E::DegeneratePair { .. } | E::XiNotNormalized { .. } => {
                CliError::Degenerate(e.to_string())
            }
            E::InvalidSampling(_) => CliError::Usage(e.to_string()),
            other => CliError::Assertion(other.to_string()),
        }
    }
}
