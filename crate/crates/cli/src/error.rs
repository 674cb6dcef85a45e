use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("required key \"{0}\" missing")]
    MissingKey(&'static str),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] drp_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("run blew up at step {step}")]
    BlowUp { step: usize },
}

impl CliError {
    /// 1 usage/parse, 2 numerical audit failure, 3 blow-up.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Audit(_) => 2,
            CliError::BlowUp { .. } => 3,
            CliError::Core(drp_core::Error::BlowUp { .. }) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
