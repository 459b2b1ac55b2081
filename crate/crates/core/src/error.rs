use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series of the wrong order (e.g. reciprocal of a non-invertible series).
    #[error("order error: {0}")]
    Order(String),

    /// A series truncated too early for the requested exact result.
    #[error("truncation error: series known to t^{have}, need t^{need}")]
    Truncation { have: usize, need: usize },

    /// Substitution of a series with a nonzero constant term.
    #[error("composition error: inner series has nonzero constant term")]
    Composition,

    #[error(transparent)]
    Parse(#[from] crate::expr::ParseError),
}
