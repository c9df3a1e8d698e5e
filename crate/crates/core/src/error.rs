use crate::HalfInt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("operator does not commute with {with} (commutator norm {norm:e})")]
    NotInvariant { with: &'static str, norm: f64 },

    #[error("no highest-weight vectors with total spin {0}")]
    EmptySector(HalfInt),

    #[error("Gram matrix is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("matrix is reducible: irreducibility failed")]
    Reducible,

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("basis index misalignment: {0}")]
    IndexMisalignment(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures caused by floating-point trouble rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::IllConditioned { .. } | Error::NotInvariant { .. }
        )
    }
}
