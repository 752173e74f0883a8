use thiserror::Error;

use crate::poly::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid block specification: {0}")]
    InvalidBlocks(String),

    #[error("polynomial is not symmetric under the block permutation group")]
    NotSymmetric,

    #[error("degree cap exceeded: block {block} has degree {degree} > cap {cap}")]
    DegreeCapExceeded { block: usize, degree: u32, cap: u32 },

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("composition size mismatch: {0} vs {1}")]
    CompositionMismatch(usize, usize),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("membership undecided: {0}")]
    Undecided(String),

    #[error("missing Mayer-Vietoris data for index set {0:?}")]
    MissingSubset(Vec<usize>),
}
