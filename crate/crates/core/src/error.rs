use thiserror::Error;

use crate::scalars::RingSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),

    #[error("{0} is not invertible")]
    NotInvertible(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("insertion place {place} out of range for arity {arity}")]
    ArityOutOfRange { place: usize, arity: usize },

    #[error("maps live on different modules")]
    ModuleMismatch,

    #[error("entry violates degree constraint: {0}")]
    DegreeViolation(String),

    #[error("differential does not square to zero in degree {0}")]
    NotADifferential(i64),

    #[error("assumption (A) fails in degree {degree}: invariant factors {factors:?}")]
    AssumptionAViolated { degree: i64, factors: Vec<String> },

    #[error("cycles or homology are not free in degree {degree}")]
    ProjectivityViolated { degree: i64 },

    #[error("map is not a chain map")]
    NotAChainMap,

    #[error("map induces a nonzero map on homology")]
    NonzeroInducedMap,

    #[error("element has even weight {0}")]
    EvenWeight(i64),

    #[error("element has even degree {0}")]
    EvenDegree(i64),

    #[error("source module is not the suspension of the target module")]
    SourceNotASuspension,

    #[error("product is not associative")]
    NotAssociative,

    #[error("element is not a Hochschild cocycle")]
    NotACocycle,

    #[error("invalid A_r structure: {0}")]
    InvalidArStructure(String),

    #[error("obstruction theory needs r >= 3, got {0}")]
    RTooSmall(usize),

    #[error("operation requires the {0} convention")]
    WrongConvention(&'static str),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
