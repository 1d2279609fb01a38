use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("crossing {index} at position {position} is outside [1, {max}]")]
    Range {
        index: usize,
        position: usize,
        max: usize,
    },

    #[error("diagram has {components} components, expected a knot")]
    NotAKnot { components: usize },

    #[error("crossing index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },

    #[error("rho = {rho} does not divide 2r = {modulus}")]
    RhoIncompatible { rho: u64, modulus: u64 },

    #[error("rho = {0} is even and nonzero; normalized counts are undefined")]
    EvenRhoUnsupported(u64),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("assignment is not a {rho}-graded augmentation")]
    NotAnAugmentation { rho: u64 },

    #[error("verification failed: {0}")]
    ReportFailure(String),

    #[error("gave up after {attempts} rejected samples")]
    GiveUp { attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
