use thiserror::Error;

/// Errors raised by the scheme laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown preset `{name}` (valid presets: Leapfrog, Lax, LaxWendroff, CrankNicolson)")]
    UnknownPreset { name: String },

    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {what} (expected {expected}, got {actual})")]
    DimensionMismatch {
        what: &'static str,
        expected: String,
        actual: String,
    },

    #[error("corner data disagrees at {corner}: {a} vs {b}")]
    CornerMismatch {
        corner: &'static str,
        a: f64,
        b: f64,
    },

    #[error("singular amplification polynomial at kappa*h = {kappa_h}")]
    SingularMode { kappa_h: f64 },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("infeasible minimum-norm entry at ({row}, {col}): both diagonal factors vanish but rhs = {rhs}")]
    InfeasibleEntry { row: usize, col: usize, rhs: f64 },

    #[error("zero diagonal factor at index {index}")]
    SingularFactor { index: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tridiagonal solve failed at step {step}: {source}")]
    StepSolve { step: usize, source: Box<Error> },

    #[error("run blew up at step {step}")]
    BlowUp {
        step: usize,
        partial: Box<crate::simulator::ErrorSeries>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dims(r: usize, c: usize) -> String {
    format!("{r}x{c}")
}
