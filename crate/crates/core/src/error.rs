use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hypergeometric series did not settle within the term cap.
    #[error("series for {what} did not converge within {terms} terms")]
    NonConvergence { what: String, terms: usize },

    /// A suite configuration could not be read or validated.
    #[error("configuration error in {path}: {field}: {message}")]
    Config {
        path: String,
        field: String,
        message: String,
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
