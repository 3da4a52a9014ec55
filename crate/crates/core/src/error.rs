//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Enumeration or closed-form count exceeded the configured budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A tail certificate was issued for a different exponent p.
    #[error("tail certificate mismatch: {0}")]
    TailMismatch(String),

    /// The psi weight vanishes on a carried block outside its declared zero set.
    #[error("psi weight vanishes on carried block nu={nu}")]
    PsiZeroDivision { nu: u32 },

    /// An operation required a certified tail bound but none was available.
    #[error("uncertified tail: {0}")]
    UncertifiedTail(String),

    #[error("modulus evaluation error: {0}")]
    Evaluation(String),

    #[error("unknown series: {0}")]
    UnknownSeries(String),

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
