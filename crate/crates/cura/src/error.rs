//! Error types shared across the library and the CLI.

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for geometry construction, numeric domain violations,
/// configuration loading, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation
    /// (e.g. a non-finite argument or an inverse queried outside its image).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid argument (length mismatch, empty input, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Geometry parameters violate their invariants.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// Configuration file or override could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems,
    /// 3 for numeric/domain problems (including I/O during a run).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
