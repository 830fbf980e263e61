//! Error type shared by all modules.

/// Errors produced by game construction, solvers and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain (e.g. a flip
    /// probability above 1/2).
    #[error("domain error: {0}")]
    Domain(String),

    /// Dimensions of two objects do not fit together.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A dense table would need more elements than the configured budget.
    #[error("table needs {required} elements, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    /// An enumeration would exceed the configured candidate budget.
    #[error("enumeration of {required} candidates exceeds budget {budget}")]
    EnumerationBudget { required: u128, budget: u128 },

    /// Malformed input file; `path` is the JSON field path.
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },

    /// A probability table does not sum to one.
    #[error("not normalized: {0}")]
    Normalization(String),

    /// A game does not satisfy the hypotheses required by a solver.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    /// Vertex enumeration detected an unbounded polyhedron.
    #[error("unbounded polyhedron: {0}")]
    Unbounded(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
