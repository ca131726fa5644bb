use hyperent_core::Error;

/// Failures surfaced to the shell, each with a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("post-selected state is empty: {0}")]
    EmptyState(String),
    #[error("infeasible target: {0}")]
    Infeasible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::EmptyState(_) => 3,
            CliError::Infeasible(_) => 4,
            CliError::Dimension(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroState { ref killers } if killers.is_empty() => CliError::EmptyState("every branch vanished".into()),
            Error::ZeroState { killers } => CliError::EmptyState(format!("blocked by {}", killers.join(", "))),
            Error::Infeasible(why) | Error::UnsupportedDegrees(why) => CliError::Infeasible(why),
            e @ (Error::DimensionMismatch { .. } | Error::OutsideEncoding(_)) => CliError::Dimension(e.to_string()),
            other => CliError::Schema(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
