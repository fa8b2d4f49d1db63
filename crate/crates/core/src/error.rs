use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("non-spherical embedding: V - E + F = {0}, expected 2")]
    NonSphericalEmbedding(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {0} lies on a boundary face; its pattern is incomplete")]
    IncompletePattern(u64),

    #[error("vertex {vertex} has negative curvature {curvature}")]
    NotNonnegativelyCurved { vertex: u64, curvature: Rational },

    #[error("incompatible boundaries: {0}")]
    IncompatibleBoundaries(String),

    #[error("gluing produces a non-simple graph: {0}")]
    NonSimpleResult(String),

    #[error("prism-like structure violated: {0}")]
    NotPrismlikeStructure(String),

    #[error("total curvature vanishes; T_G is empty")]
    UndefinedForFlat,
}

pub type Result<T> = std::result::Result<T, Error>;
