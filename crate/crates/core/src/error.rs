use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not square-free")]
    NotSquarefree(u64),

    #[error("polynomial {0} is reducible over the rationals")]
    Reducible(String),

    #[error("could not parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("prime {p} divides the discriminant {disc}")]
    Ramified { p: u64, disc: i64 },

    #[error("cycle type {0} does not occur in group {1}")]
    Unrealizable(String, String),

    #[error("{n} exceeds the prime table limit {limit}")]
    TableLimit { n: u64, limit: u64 },

    /// Residue-class refinement went deeper than the separability bound allows.
    #[error("depth cap {cap} exceeded at p = {p}")]
    DepthCapExceeded { p: u64, cap: u32 },

    #[error("polynomial vanishes exactly at the integer {0}")]
    ZeroValue(String),

    /// Exact Galois classification contradicts the observed Frobenius cycle types.
    #[error("classification {claimed} contradicted by p = {p} with factorization type {observed}")]
    ClassificationMismatch {
        claimed: String,
        p: u64,
        observed: String,
    },

    /// Criterion and direct local computation disagree for a twist.
    #[error("criterion says {criterion} but direct local solver says {direct} for q = {q}")]
    CriterionMismatch { q: u64, criterion: bool, direct: bool },

    #[error("bad file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that indicate an internal inconsistency rather than bad input.
    pub fn is_tripwire(&self) -> bool {
        matches!(
            self,
            Error::DepthCapExceeded { .. }
                | Error::ClassificationMismatch { .. }
                | Error::CriterionMismatch { .. }
                | Error::ZeroValue(_)
        )
    }
}
