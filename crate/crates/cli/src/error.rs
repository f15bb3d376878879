use thiserror::Error;

use ruelle_core::{GroupError, LfuncError, TorsionError, TransformError};

/// Failure classes, one per exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("residual check failed: {0}")]
    Residual(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::Residual(_) | CliError::Numerical(_) => 5,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LfuncError> for CliError {
    fn from(e: LfuncError) -> Self {
        match e {
            LfuncError::BelowAbscissa { .. } | LfuncError::InvalidAbscissa(_) => CliError::Precondition(e.to_string()),
            LfuncError::InvalidData(_) => CliError::Input(e.to_string()),
            LfuncError::Transform(_) | LfuncError::Export(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<TorsionError> for CliError {
    fn from(e: TorsionError) -> Self {
        match e {
            TorsionError::HypothesisFailed(msg) => CliError::Hypothesis(msg),
            TorsionError::NotAcyclic { .. } => CliError::Hypothesis(e.to_string()),
            TorsionError::Lfunc(inner) => inner.into(),
            TorsionError::NotAComplex(_) | TorsionError::PoleAtOne => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o: {e}"))
    }
}
