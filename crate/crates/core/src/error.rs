use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} spins, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dense realization of {spins} spins exceeds the cap of {cap}")]
    DimensionCap { spins: usize, cap: usize },

    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),

    #[error("unknown target `{0}`")]
    UnknownTarget(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
