use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into three families that the command-line front end maps to
/// distinct exit codes: input validation, numerical failure, and violated
/// physical properties.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis too large: {dimension} states exceeds the cap of {cap}")]
    BasisTooLarge { dimension: u128, cap: usize },

    #[error("invalid basis parameters: {0}")]
    InvalidBasis(String),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("phase average with {phases} phases aliases a subsystem charge spread of {spread}")]
    Aliasing { phases: usize, spread: usize },

    #[error("state does not commute with the total charge (deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("total charge sector N={0} is empty")]
    EmptySector(usize),

    #[error("operation requires {expected} statistics")]
    StatisticsMismatch { expected: &'static str },

    #[error("unsupported layout: {0}")]
    UnsupportedLayout(String),

    #[error("channel is not trace preserving (residual {0:.3e})")]
    IncompleteChannel(f64),

    #[error("unknown state tag `{0}`")]
    UnknownState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PropertyViolation(_) => 3,
            Error::NotPositive(_)
            | Error::EmptySector(_)
            | Error::Numerical(_)
            | Error::IncompleteChannel(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
