use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io { .. } => 2,
            Self::Precondition(_) => 3,
            Self::Numeric(_) => 4,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<cfwgan_core::Error> for CliError {
    fn from(e: cfwgan_core::Error) -> Self {
        use cfwgan_core::Error as E;
        match e {
            E::Domain(_) | E::Precondition(_) | E::LengthMismatch { .. } => {
                Self::Precondition(e.to_string())
            }
            E::NonConvergence(_) | E::Numeric(_) => Self::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
