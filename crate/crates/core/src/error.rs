use thiserror::Error;

use crate::derivatives::FunctionalValue;
use crate::rho_infinity::QuadratureTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid norm spec: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The numeric limit or the quadrature did not meet its tolerance.
    /// The best available estimate is carried along.
    #[error(
        "NONCONVERGED: best estimate {} with abs_error {}",
        crate::text::format_complex(.estimate.value),
        .estimate.abs_error
    )]
    Nonconverged {
        estimate: Box<FunctionalValue>,
        trace: Option<Box<QuadratureTrace>>,
    },

    #[error("N_TOO_SMALL: rho_n requires n > 2, got n = {0}")]
    NTooSmall(usize),

    #[error("NOT_SMOOTH: the semi-inner product is not unique for this norm")]
    NotSmooth,

    #[error("ZERO_BASE: the base vector is zero")]
    ZeroBase,

    #[error("ZERO_MAP: the linear map is zero")]
    ZeroMap,

    #[error("R_UNKNOWN: the dual segment constant is not known for this norm")]
    RUnknown,
}

impl Error {
    pub(crate) fn nonconverged(estimate: FunctionalValue) -> Self {
        Error::Nonconverged {
            estimate: Box::new(estimate),
            trace: None,
        }
    }

    /// Best estimate carried by a [`Error::Nonconverged`], if any.
    pub fn estimate(&self) -> Option<&FunctionalValue> {
        match self {
            Error::Nonconverged { estimate, .. } => Some(estimate),
            _ => None,
        }
    }
}

/// Accepts the best estimate of a non-converged evaluation.
///
/// Returns the value and whether it converged. Any other error is passed on.
pub(crate) fn accept_estimate(r: Result<FunctionalValue>) -> Result<(FunctionalValue, bool)> {
    match r {
        Ok(v) => Ok((v, true)),
        Err(Error::Nonconverged { estimate, .. }) => Ok((*estimate, false)),
        Err(e) => Err(e),
    }
}
