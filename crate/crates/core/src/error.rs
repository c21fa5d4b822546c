//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A graph spec string failed to parse or violated a generator
    /// precondition. `at` points into the spec string where parsing stopped.
    #[error("graph spec '{spec}' at position {at}: {msg}")]
    GraphSpec { spec: String, at: usize, msg: String },

    /// A Cayley table file failed validation.
    #[error("group table {path}: {msg}")]
    GroupTable { path: String, msg: String },

    /// Generators do not generate, or a generated graph fell apart.
    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParam { name: &'static str, msg: String },

    /// A scale parameter does not fit on the graph (sphere empty, radius
    /// past the diameter, and similar).
    #[error("scale infeasible: {0}")]
    ScaleInfeasible(String),

    /// A threshold equation has no solution on (0,1) for this graph.
    #[error("target unreachable: {0}")]
    TargetUnreachable(String),

    /// No witness path with the requested length exists.
    #[error("no path of requested length: {0}")]
    NoPath(String),

    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Shorthand for [`Error::InvalidParam`].
pub(crate) fn invalid(name: &'static str, msg: impl Into<String>) -> Error {
    Error::InvalidParam { name, msg: msg.into() }
}
