use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Geometry that cannot describe a valid screen (bad contraction factor,
    /// non-orthogonal rotation, dimension above the screen dimension, ...).
    InvalidGeometry(String),
    /// An argument outside the documented domain of an operation.
    Domain(String),
    /// Two barycentres (or a field point and a quadrature node) coincide.
    SingularEvaluation(String),
    /// Pivot breakdown or loss of definiteness in a factorisation.
    Singular(String),
    /// An iteration failed to reach its tolerance within the iteration cap.
    NoConvergence(String),
    /// The dense matrix would exceed the configured memory budget.
    MemoryBudget { required: usize, budget: usize },
    /// Meshes that are not nested where nesting is required.
    NotNested(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGeometry(s) => write!(f, "invalid geometry: {s}"),
            Error::Domain(s) => write!(f, "argument out of domain: {s}"),
            Error::SingularEvaluation(s) => write!(f, "singular evaluation: {s}"),
            Error::Singular(s) => write!(f, "singular system: {s}"),
            Error::NoConvergence(s) => write!(f, "no convergence: {s}"),
            Error::MemoryBudget { required, budget } => write!(
                f,
                "dense matrix needs {required} bytes, above the budget of {budget} bytes"
            ),
            Error::NotNested(s) => write!(f, "meshes not nested: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularEvaluation(_) | Error::Singular(_) | Error::NoConvergence(_)
        )
    }
}
