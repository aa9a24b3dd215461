use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two classes live on Néron–Severi lattices of different rank.
    #[error("dimension mismatch: expected NS rank {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter lies outside the regime an operation is defined on.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("cannot solve along H: {0}")]
    Unsolvable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),

    /// An identity that must hold exactly did not. Indicates a bug.
    #[error("internal identity failed: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Regime(_) | Error::Hypothesis(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
