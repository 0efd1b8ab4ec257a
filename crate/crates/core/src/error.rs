use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A certified quantity could not be pinned down before reaching the precision cap.
    #[error("precision exhausted at {digits} digits: {what}")]
    PrecisionExhausted { what: String, digits: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The continued fraction expansion is too shallow for the request.
    #[error("continued fraction depth exhausted: {0}")]
    DepthExhausted(String),

    /// A reduction case with non-positive epsilon that is not explained by an integral shift.
    #[error("unresolved reduction exception: {0}")]
    UnresolvedException(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn precision(what: impl Into<String>, digits: u32) -> Self {
        Error::PrecisionExhausted {
            what: what.into(),
            digits,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
