use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The element has vanishing canonical coordinate `α` and cannot be inverted.
    #[error("zero divisor: element is not invertible")]
    ZeroDivisor,

    /// A point was passed outside the open domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The disk problem fails the contour-integral solvability condition.
    #[error("unsolvable: contour integral = {integral}")]
    Unsolvable { integral: f64 },

    /// A finite-difference probe would leave its region.
    #[error("region error: {0}")]
    Region(String),

    #[error("invalid boundary data: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit status: 2 for unsolvable problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Unsolvable { .. } => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}
