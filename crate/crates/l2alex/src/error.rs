use thiserror::Error;

/// Errors shared by the link model, the torsion engine and the norm geometry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The construction provably yields a split link where a non-split one is required.
    #[error("split link: {0}")]
    SplitLink(String),

    /// No formula applies to the requested construction.
    #[error("unsupported construction: {0}")]
    UnsupportedConstruction(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Surgery framing matrix must have determinant one.
    #[error("bad framing: p*s - q*r = {det}, expected 1")]
    BadFraming { det: i64 },

    #[error("exponent expression is not a seminorm")]
    NotASeminorm,

    #[error("dual ball geometry is limited to dimension 3, got {dim}")]
    DimensionTooLarge { dim: usize },

    #[error("missing declaration: {0}")]
    MissingDeclaration(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
