use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall into two families that the command-line front end maps to
/// distinct exit codes: input errors (malformed or inconsistent data) and
/// capability errors (the request is well formed but exceeds what the desk
/// scale implementation supports).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial is not monic")]
    NonMonic,
    #[error("minimal polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("minimal polynomial is reducible over the rationals; factor {factor}")]
    ReducibleMinPoly { factor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("{0} is not squarefree")]
    NotSquarefree(String),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("unit decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("no nonsingular selection of embeddings exists")]
    NoNonsingularSelection,
    #[error("degree cap exceeded: needed {needed}, cap {cap}")]
    DegreeCapExceeded { needed: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operation requires a simple multi-recurrence")]
    NonSimpleUnsupported,
    #[error("base {0} is not an algebraic integer")]
    NonIntegerBase(String),
    #[error("subset enumeration limited to {cap} summands, got {got}")]
    DimensionCapExceeded { got: usize, cap: usize },
    #[error("at least {needed} witnesses are required, got {got}")]
    InsufficientWitnesses { needed: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no unit system available: {0}")]
    MissingUnitSystem(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Capability errors: valid input that exceeds the implemented scope.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Error::DegreeCapExceeded { .. }
                | Error::NonSimpleUnsupported
                | Error::DimensionCapExceeded { .. }
                | Error::Unsupported(_)
                | Error::DecompositionFailed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
