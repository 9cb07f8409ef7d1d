use thiserror::Error;

/// Errors raised by the triangular matrix function toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    Empty,
    #[error("not triangular: nonzero entry at ({row}, {col})")]
    NotTriangular { row: usize, col: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid scaling factor {0}")]
    InvalidAlpha(f64),
    #[error("invalid block count {m} for order {n}")]
    InvalidBlocks { m: usize, n: usize },
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("principal root undefined: eigenvalue {index} lies on the closed negative real axis")]
    PrincipalRootUndefined { index: usize },
    #[error("ill-posed recurrence at ({row}, {col})")]
    IllPosedRecurrence { row: usize, col: usize },
    #[error("principal log undefined: eigenvalue {index} lies on the closed negative real axis")]
    PrincipalLogUndefined { index: usize },
    #[error("no convergence after {0} steps")]
    MaxStepsExceeded(usize),
    #[error("branch point: eigenvalue {index} equals +1 or -1")]
    BranchPoint { index: usize },
    #[error("confluent spectrum, oracle unavailable (eigenvalues {0} and {1})")]
    ConfluentSpectrum(usize, usize),
    #[error("branch cut crossed: singular resolvent at t = {0}")]
    BranchCutCrossed(f64),
    #[error("kronecker form capped at order {cap}, got {n}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown matrix id `{0}`")]
    UnknownMatrix(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the numbers rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow(_)
                | Error::PrincipalRootUndefined { .. }
                | Error::IllPosedRecurrence { .. }
                | Error::PrincipalLogUndefined { .. }
                | Error::MaxStepsExceeded(_)
                | Error::BranchPoint { .. }
                | Error::ConfluentSpectrum(..)
                | Error::BranchCutCrossed(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
