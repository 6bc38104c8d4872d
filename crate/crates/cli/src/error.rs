use std::fmt;

/// CLI failure classes, mapped onto process exit codes:
/// config errors exit 2, data errors 3, numerical aborts 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Config(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    /// Machine-parsable tag emitted as the first token of the error line.
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Config(_) => "CONFIG_ERROR",
            CliError::Data(_) => "DATA_ERROR",
            CliError::Numeric(_) => "NUMERIC_ERROR",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Data(m) | CliError::Numeric(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<copmix::Error> for CliError {
    fn from(e: copmix::Error) -> Self {
        match e {
            copmix::Error::NonFiniteDensity { .. } => CliError::Numeric(e.to_string()),
            copmix::Error::InvalidTheta { .. }
            | copmix::Error::UnsupportedDimension { .. }
            | copmix::Error::UnsupportedOrder { .. } => CliError::Config(e.to_string()),
            copmix::Error::Domain(_) | copmix::Error::InvalidInput(_) => {
                CliError::Data(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(format!("io: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
