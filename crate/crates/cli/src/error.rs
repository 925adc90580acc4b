/// Driver errors, classified for exit codes: config errors exit 2, I/O
/// errors exit 3, internal invariant violations exit 4.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError::Io(message.into())
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError::Internal(message.into())
    }

    /// Machine-greppable code printed as `error[CODE]: message`.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "CONFIG",
            CliError::Io(_) => "IO",
            CliError::Internal(_) => "INTERNAL",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}
