//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The regressor Gram matrix is (numerically) rank deficient.
    #[error("singular design: {0}")]
    SingularDesign(&'static str),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// An operation that needs at least one value received none.
    #[error("empty input")]
    EmptyInput,

    /// Too few observations remain at this horizon for a two-regressor fit.
    #[error("horizon {h} too large for sample size {n} (need n - h >= 3)")]
    HorizonTooLarge { n: usize, h: usize },

    /// A standard error is zero, so studentized statistics are undefined.
    #[error("degenerate variance: {0}")]
    DegenerateVariance(&'static str),

    /// More than the tolerated share of bootstrap draws stayed singular
    /// after the redraw cap.
    #[error("{failed} of {total} bootstrap draws degenerate after {cap} redraws each")]
    TooManyDegenerateDraws {
        failed: usize,
        total: usize,
        cap: usize,
    },

    /// Bootstrap draws were produced under a different scheme or SE kind
    /// than the interval method requires.
    #[error("mismatched bootstrap draws: {0}")]
    MismatchedDraws(String),

    /// Invalid study configuration; the message names the offending field.
    #[error("config error: {0}")]
    ConfigError(String),

    /// A Monte Carlo replication could not be completed.
    #[error("replication {replication} failed: {source}")]
    ReplicationFailed {
        replication: u64,
        #[source]
        source: Box<Error>,
    },
}
