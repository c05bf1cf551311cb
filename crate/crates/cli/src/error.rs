use duopos::domains::DomainError;
use duopos::hermite::BasisError;
use duopos::verify::VerifyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    /// Machine-readable class written to stderr alongside the message.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Domain(_) | CliError::Basis(_) => "input",
            CliError::Verify(_) => "oracle",
            CliError::ChecksFailed(_) => "check_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Domain(_) | CliError::Basis(_) => 3,
            CliError::Io(_) => 4,
            CliError::Verify(_) => 5,
        }
    }
}
