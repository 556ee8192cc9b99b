use thiserror::Error;

use crate::pencil::SpectralValue;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,

    #[error("the zero binary form has no factorization")]
    ZeroForm,

    #[error("subspace is not closed under the commutator bracket")]
    NotBracketClosed,

    #[error("unknown registry algebra `{0}`")]
    UnknownName(String),

    #[error("degenerate pencil: χ(λ,μ,F) vanishes identically ({0})")]
    DegeneratePencil(String),

    #[error("shift μ = {0} makes A − μAᵀ singular")]
    BadShift(String),

    #[error("spectral value {0} is an algebraic orbit; use the Jordan decomposition instead")]
    AlgebraicOrbit(String),

    #[error("invalid spectral value {0} for this operation")]
    InvalidAlpha(String),

    #[error("pairing is singular: {0}")]
    SingularPairing(String),

    #[error("no spectral block at {0}")]
    MissingBlock(SpectralValue),

    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: String, got: usize },

    #[error("algebra is not associative: {0}")]
    NotAssociative(String),

    #[error("algebra has no unity")]
    NoUnity,

    #[error("algebra is not of index-1 shape: {0}")]
    NotIndexOne(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}
