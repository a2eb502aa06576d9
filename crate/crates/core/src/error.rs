//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical spec violates one of its invariants.
    #[error("invalid spec: {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    /// Field evaluation requested on (or too close to) a filament.
    #[error("field evaluation point lies on a current filament (r={r} m, z={z} m)")]
    SingularPoint { r: f64, z: f64 },

    /// Geometric constraint violated (e.g. loaded area as large as the plate).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// An iterative scheme failed to converge within its budget.
    #[error("numerical convergence failure: {0}")]
    Convergence(String),

    /// The linear solve hit a zero pivot.
    #[error("singular linear system: {0}")]
    SingularSystem(String),

    /// Argmax landed on the search-range boundary.
    #[error("search range too narrow: argmax at boundary z={z} m of [{lo}, {hi}] m")]
    RangeTooNarrow { z: f64, lo: f64, hi: f64 },

    /// Degenerate geometry produced zero response.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// Configuration validation failure; names the offending key.
    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Pipeline stage wrapper so failures carry the stage that raised them.
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// CLI exit code: 2 for input errors, 3 for numerical errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Io(_) | Error::Json(_) | Error::InvalidSpec { .. } => 2,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
