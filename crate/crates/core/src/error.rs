use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix {entries:?} has determinant {det}, expected 1")]
    NotUnimodular { entries: [String; 4], det: String },

    #[error("{0} and {1} are not coprime")]
    NotCoprime(String, String),

    #[error("matrix {0} is not parabolic")]
    NotParabolic(String),

    #[error("point {x}+{y}i is not in the upper half-plane")]
    NotInUpperHalfPlane { x: f64, y: f64 },

    #[error("invalid coset representation: {0}")]
    InvalidRepresentation(#[from] crate::subgroup::Violation),

    #[error("coset enumeration exceeded the budget of {budget} cosets")]
    IndexBoundExceeded { budget: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a valid fiber configuration for a smooth elliptic surface: 12 does not divide {0}")]
    NonIntegralChi(i64),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("inequality violated: {0}")]
    InequalityViolated(String),
}
