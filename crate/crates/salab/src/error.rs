use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("connection is not integrable: F^(0,2) is nonzero")]
    NonIntegrableConnection,
    #[error("curvature must be of pure type (1,1): {0} component is nonzero")]
    BadCurvatureType(&'static str),
    #[error("alpha is not a cocycle: delbar^theta alpha is nonzero")]
    NotACocycle,
    #[error("Maurer-Cartan residual is nonzero")]
    MCViolated,
    #[error("gauge map is not invertible: g * g_inv != I")]
    NotInvertible,
    #[error("gauge map is flagged holomorphic but delbar g != 0")]
    NotHolomorphic,
    #[error("incompatible connection family on overlap ({0},{1})")]
    IncompatibleFamily(usize, usize),
    #[error("type error: {0}")]
    Type(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn type_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Type(msg.into()))
}
