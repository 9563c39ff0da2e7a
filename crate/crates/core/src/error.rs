use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A value violates the structural requirements of its type.
    #[error("validation error: {0}")]
    Validation(String),
    /// A hypothesis of the underlying formula does not hold for the inputs.
    #[error("feasibility error: {0}")]
    Feasibility(String),
    /// Two finitely supported random objects live on different partitions.
    #[error("partition mismatch: {0}")]
    Partition(String),
    /// A textual input specification could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// File access failed.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
