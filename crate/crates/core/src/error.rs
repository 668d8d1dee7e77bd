use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be ≥ 4 (got {0})")]
    GenusTooSmall(i64),

    #[error("genus {0} is too large for machine-sized pair indices")]
    GenusTooLarge(i64),

    #[error("({c},{d}) is not an admissible pair for genus {g}")]
    NotAdmissible { c: i64, d: i64, g: i64 },

    #[error("operation requires g ≡ {expected} mod 4, but genus {g} has residue {residue}")]
    WrongResidue { g: i64, expected: i64, residue: i64 },

    #[error("wall index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    #[error("Mukai vector {0} is not orthogonal to v")]
    NotOrthogonal(String),

    #[error("symmetric square needs positive rank")]
    ZeroRank,

    #[error("non-integral value where an integer is required: {0}")]
    NonIntegral(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
