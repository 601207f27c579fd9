use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("power iteration did not converge after {iterations} iterations (partial estimate {estimate})")]
    NonConvergence { estimate: f64, iterations: usize },

    /// A hypothesis of the ideal problem fails at a grid node.
    #[error("hypothesis ({hypothesis}) violated at z = {re:+.6}{im:+.6}i, margin {margin:e}")]
    Hypothesis {
        hypothesis: &'static str,
        re: f64,
        im: f64,
        margin: f64,
    },

    /// The discretisation is too coarse for the requested accuracy.
    #[error("refinement needed: {0}")]
    Refinement(String),

    #[error("rejected: {0}")]
    Rejected(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
