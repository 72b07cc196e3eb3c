use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("rankings cover different node sets ({left} vs {right} nodes, {shared} shared)")]
    MismatchedNodes {
        left: usize,
        right: usize,
        shared: usize,
    },

    #[error("score for node {node} is not finite: {value}")]
    NonFiniteScore { node: NodeId, value: f64 },

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
