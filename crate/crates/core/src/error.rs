use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, empty vertex set, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A predicate handed to a complex builder was not downward closed.
    #[error("construction error: predicate accepts {superset} but rejects its subset {subset}")]
    NotDownwardClosed { superset: String, subset: String },

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested object would exceed the materialization cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The solver exhausted every face of the constraint complex.
    #[error("no selection: {0}")]
    NoSelection(String),

    /// The Tverberg search exhausted every admissible labeling.
    #[error("no partition: {0}")]
    NoPartition(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
