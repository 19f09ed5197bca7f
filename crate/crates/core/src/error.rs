use alloc::string::String;

use crate::graph::NodeId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid path: nodes {0} and {1} are not adjacent")]
    InvalidPath(NodeId, NodeId),

    #[error("node {1} is unreachable from node {0}")]
    Unreachable(NodeId, NodeId),

    #[error("graph is not connected")]
    NotConnected,

    #[error("no path from {0} to {1} within {2} hops")]
    NoPath(NodeId, NodeId, usize),

    #[error("matrix is singular (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("power iteration did not converge after {iterations} iterations (gap {gap:e})")]
    NoConvergence { iterations: usize, gap: f64 },

    #[error("no connected topology after {attempts} attempts; try a larger radio range")]
    TopologyGeneration { attempts: usize },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
