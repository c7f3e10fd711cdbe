use thiserror::Error;

/// Errors raised across mesh construction, local operators, assembly and studies.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Offending edges are reported as vertex-index pairs.
    #[error("nonconforming mesh: {reason} (edges: {edges:?})")]
    Nonconforming {
        reason: String,
        edges: Vec<(usize, usize)>,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("singular local system on element {element}: {message}")]
    SingularElement { element: usize, message: String },

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("cannot fit: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
