use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {0} is too small")]
    DegreeTooSmall(usize),
    #[error("root on or near the boundary circle could not be separated")]
    BoundaryUndecidable,
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("inconsistent subspace representation: {0}")]
    InconsistentRep(String),
    #[error("degree {degree} exceeds ambient degree {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("root list does not certify all roots")]
    RootsIncomplete,
    #[error("polynomial coefficients must be integers")]
    NonIntegerCoefficients,
    #[error("dimension {n} exceeds the cap {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("candidates could not be ordered at the precision cap")]
    UndecidableTie,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no rank drop among M_0..M_{0}")]
    NoRankDrop(usize),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no root cluster after {0} halvings of epsilon")]
    RootClusterFailed(u32),
    #[error("prime {0} divides the witness determinant")]
    PrimeDividesD(u64),
    #[error("polynomial is reducible")]
    Reducible,
    #[error("values are equal")]
    Equal,
    #[error("precision cap of {0} bits exhausted")]
    PrecisionExhausted(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hard assertion failed: {0}")]
    HardAssertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
