//! Error types shared by the model-construction layer.

use thiserror::Error;

/// Errors raised while reading or constructing a dimer model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimerError {
    /// Malformed input text.
    #[error("parse error on line {line}: {msg}")]
    Parse {
        /// One-based line number (0 when the problem is not tied to a line).
        line: usize,
        /// Description of the problem.
        msg: String,
    },
    /// The rotation system does not describe a cell decomposition of the torus.
    #[error("topology error: {0}")]
    Topology(String),
    /// An edge does not join a black vertex to a white vertex.
    #[error("bipartiteness error: {0}")]
    Bipartite(String),
    /// The graph has more than one connected component.
    #[error("the graph is disconnected")]
    Disconnected,
    /// A structural operation was refused.
    #[error("invalid operation: {0}")]
    Invalid(String),
}

impl DimerError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        DimerError::Parse {
            line,
            msg: msg.into(),
        }
    }
}
