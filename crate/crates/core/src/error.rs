use thiserror::Error;

/// Errors raised by the magnitude and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input failed a structural check (shape, symmetry, duplicates, ranges).
    #[error("invalid input: {0}")]
    Validation(String),

    /// Two points coincide, so the similarity matrix is singular.
    #[error("points {first} and {second} coincide; the similarity matrix is singular")]
    DuplicatePoints { first: usize, second: usize },

    /// The similarity matrix could not be factored as symmetric positive definite.
    #[error("similarity matrix is not positive definite: pivot {min_pivot:e} at row {row}")]
    NotPositiveDefinite { min_pivot: f64, row: usize },

    /// Exhaustive subset enumeration was requested above the configured cap.
    #[error(
        "ambient dimension {dimension} exceeds the enumeration cap {cap}; \
         use a box or coordinate-simplex input, raise the cap, or enable Monte Carlo mode"
    )]
    CapExceeded { dimension: usize, cap: usize },

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
