use crate::pf::Coord;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol {symbol} is out of range for an alphabet of size {size}")]
    InvalidSymbol { symbol: u32, size: u32 },
    #[error("partial functions disagree at coordinate {0}")]
    IncompatibleFunctions(Coord),
    #[error("coordinate {0} is not covered")]
    MissingCoordinate(Coord),
    #[error("enumeration of {requested} items exceeds the budget of {budget}")]
    EnumerationTooLarge { requested: u128, budget: u64 },
    #[error("invalid creature: {0}")]
    InvalidCreature(String),
    #[error("restriction to the requested sub-domain keeps no constraint")]
    EmptyRestriction,
    #[error("no system of distinct representatives exists")]
    NoSdr,
    #[error("no witness value: the packing number is zero")]
    NoWitness,
    #[error("creature domains overlap at coordinate {0}")]
    DomainOverlap(Coord),
    #[error("creature domains differ")]
    DomainMismatch,
    #[error("illegal decision: {0}")]
    IllegalDecision(String),
    #[error("illegal composition: {0}")]
    IllegalComposition(String),
    #[error("illegal decomposition: {0}")]
    IllegalDecomposition(String),
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("certificate replay failed at move {step}: {reason}")]
    InvalidCertificate { step: usize, reason: String },
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("insufficient norm: {0}")]
    InsufficientNorm(String),
    #[error("condition is not aligned with the embedding: {0}")]
    NotAligned(String),
    #[error("no disjoint selection exists for the requested sizes")]
    NoSelection,
    #[error("insufficient capacity: {0}")]
    InsufficientCapacity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("malformed document: {0}")]
    Malformed(String),
}

impl Error {
    /// Stable machine-readable code used in reports and CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "invalid-alphabet",
            Error::InvalidSymbol { .. } => "invalid-symbol",
            Error::IncompatibleFunctions(_) => "incompatible-functions",
            Error::MissingCoordinate(_) => "missing-coordinate",
            Error::EnumerationTooLarge { .. } => "enumeration-too-large",
            Error::InvalidCreature(_) => "invalid-creature",
            Error::EmptyRestriction => "empty-restriction",
            Error::NoSdr => "no-sdr",
            Error::NoWitness => "no-witness",
            Error::DomainOverlap(_) => "domain-overlap",
            Error::DomainMismatch => "domain-mismatch",
            Error::IllegalDecision(_) => "illegal-decision",
            Error::IllegalComposition(_) => "illegal-composition",
            Error::IllegalDecomposition(_) => "illegal-decomposition",
            Error::InvalidCondition(_) => "invalid-condition",
            Error::InvalidCertificate { .. } => "invalid-certificate",
            Error::TruncationTooShort(_) => "truncation-too-short",
            Error::InsufficientNorm(_) => "insufficient-norm",
            Error::NotAligned(_) => "not-aligned",
            Error::NoSelection => "no-selection",
            Error::InsufficientCapacity(_) => "insufficient-capacity",
            Error::Precondition(_) => "precondition",
            Error::GenerationFailed(_) => "generation-failed",
            Error::Malformed(_) => "malformed",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::EnumerationTooLarge { .. })
    }
}
