use bcv_core::BcvError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Parse(BcvError),

    #[error("{0}")]
    Domain(BcvError),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit status: 2 usage, 3 malformed input, 4 domain, 5 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<BcvError> for CliError {
    fn from(e: BcvError) -> Self {
        if e.is_input_error() {
            CliError::Parse(e)
        } else {
            CliError::Domain(e)
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
