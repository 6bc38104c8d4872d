use crate::copula::CopulaFamily;

/// Errors produced by kernel evaluation, prior construction and the sampler.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("theta={value} lies outside the {family} parameter space")]
    InvalidTheta { family: CopulaFamily, value: f64 },

    #[error("{family} with theta={value} does not admit dimension {dim}")]
    UnsupportedDimension {
        family: CopulaFamily,
        value: f64,
        dim: usize,
    },

    #[error("inverse-generator derivative of order {order} is not available for {family}")]
    UnsupportedOrder { family: CopulaFamily, order: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite log-density for observation {observation} at theta={theta}")]
    NonFiniteDensity { observation: usize, theta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
