use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed braid text: {0}")]
    BraidSyntax(String),

    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },

    #[error("strand count must be at least 1")]
    NoStrands,

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram has {crossings} crossings, above the configured cap of {cap}")]
    ResourceLimit { crossings: usize, cap: usize },

    #[error("empty homology table")]
    EmptyTable,

    #[error("determinant mismatch: Euler characteristic gives {euler}, Jones at -1 gives {jones}")]
    DeterminantMismatch { euler: i64, jones: i64 },

    #[error("crossing {0} does not exist")]
    NoSuchCrossing(usize),

    #[error("crossing {0} is negative; only positive crossings can be resolved")]
    NegativeCrossing(usize),

    #[error("braid word is not positive")]
    NotPositive,

    #[error("duplicate crossing id {0}")]
    DuplicateCrossing(usize),

    #[error("perturbed rank law violated: {0}")]
    RankLaw(String),

    #[error("continued fraction needs a nonzero denominator")]
    ZeroDenominator,

    #[error("p and q must be coprime (got {p}/{q})")]
    NotCoprime { p: i64, q: i64 },

    #[error("determinant of the rational closure is {got}, expected {expected}")]
    ClosureDeterminant { got: i64, expected: i64 },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
