use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unparsable document, violated precondition, unsupported combination.
    #[error("{0}")]
    Validation(String),
    /// At least one Monte Carlo row fell outside its agreement band.
    #[error("{0}")]
    Disagreement(String),
    #[error("{0}")]
    Io(String),
    /// A numerical routine failed to reach its tolerance.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Disagreement(_) => 3,
            CliError::Io(_) | CliError::Numerical(_) => 1,
        }
    }
}

impl From<evm_core::Error> for CliError {
    fn from(e: evm_core::Error) -> Self {
        match e {
            evm_core::Error::Precision { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
