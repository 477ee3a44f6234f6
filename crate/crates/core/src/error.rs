//! Error type shared by the numerical core.

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violated a structural contract (shape, symmetry, size).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A stated hypothesis of a closed-form result does not hold.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    /// A runtime invariant of a simulation was broken.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A block of a stochastic block model contains no latent points.
    #[error("block {block} of the SBM holds no latent points at n = {n}")]
    EmptyBlock { block: usize, n: usize },

    /// Exact enumeration was requested for a size where it is intractable.
    #[error(
        "exact enumeration refused for n = {n}: it would visit 2^{pairs} graphs \
         (supported up to n = {max}); use the Monte Carlo method instead"
    )]
    EnumerationTooLarge { n: usize, pairs: usize, max: usize },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}
