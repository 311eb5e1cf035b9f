use thiserror::Error;

use crate::rootsys::RootSystemKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank {rank} is not admissible for family {family}")]
    InadmissibleRank { family: String, rank: usize },

    #[error("orbit exceeded the configured cap of {cap} weights")]
    OrbitCapExceeded { cap: usize },

    #[error("{op} requires a crystallographic root system, got {kind}")]
    NotCrystallographic { op: &'static str, kind: RootSystemKind },

    #[error("{op} is only implemented for degrees {supported}, got {degree}")]
    UnsupportedDegree {
        op: &'static str,
        degree: usize,
        supported: &'static str,
    },

    #[error("{op} does not apply to {kind}")]
    Inapplicable {
        op: &'static str,
        kind: RootSystemKind,
    },

    #[error("division by {divisor} is not exact in {context}")]
    InexactDivision { divisor: String, context: String },

    #[error("quotient has infinite exponent: {witness} is not in the span of the denominator lattice")]
    InfiniteExponent { witness: String },

    #[error("invariant form normalization failed: {0}")]
    Normalization(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("{0}")]
    Parse(String),

    #[error("cache i/o failed for {path}: {source}")]
    CacheIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
