use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Hermite order {0} exceeds the supported maximum of {max}", max = crate::special::HERMITE_ORDER_CAP)]
    HermiteOrderTooLarge(usize),

    #[error("expansion order {order} is outside the supported range {min}..={max}")]
    UnsupportedExpansionOrder { order: usize, min: usize, max: usize },

    #[error("fugacity z = {z} diverges the loop sum: require z < exp(d*beta/2) = {bound}")]
    Divergence { z: f64, bound: f64 },

    #[error("loop order {0} cannot be integrated on a deterministic grid; use Monte Carlo")]
    UnsupportedLoopOrder(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("missing potential derivative for order {order}: {what}")]
    MissingDerivative { order: usize, what: &'static str },

    #[error("matrix is not symmetric (max |A - A^T| = {0:e})")]
    AsymmetricMatrix(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
