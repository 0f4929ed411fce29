use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the process exit codes used by the CLI: `Parse` and
/// `Domain` are configuration errors, `Resource` is a budget violation, and
/// the remaining variants are numeric or search failures.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain (bad symbol, wrong depth, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or search exceeded its configured budget.
    #[error("resource budget exceeded while {context} (budget {budget})")]
    Resource { context: String, budget: u64 },

    /// An iteration failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A bounded search finished without finding a witness.
    #[error("not found: {0}")]
    NotFound(String),

    /// A compound object could not be assembled from its parts.
    #[error("construction error: {0}")]
    Construction(String),

    /// A configuration file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn resource(context: impl Into<String>, budget: u64) -> Self {
        Error::Resource { context: context.into(), budget }
    }
}
