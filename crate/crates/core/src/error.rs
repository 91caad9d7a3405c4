use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graphon at {position}: {message}")]
    InvalidGraphon { position: String, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid configuration at {position}: {message}")]
    InvalidConfig { position: String, message: String },

    #[error("{blocks} blocks exceed the exact enumeration cap of {cap}")]
    CapExceeded { blocks: usize, cap: usize },

    #[error("graph is bipartite or disconnected")]
    BipartiteOrDisconnected,

    #[error("not a binary tree: {0}")]
    NotBinaryTree(String),

    #[error("greedy path construction stuck at vertex {vertex}: fewer than two fresh neighbours")]
    GreedyStuck { vertex: usize },

    #[error("sampled graph carries no block types")]
    TypesMissing,

    #[error("no peninsula certificate attached")]
    NoCertificate,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGraphon { .. } => "invalid_graphon",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidConfig { .. } => "invalid_config",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::BipartiteOrDisconnected => "bipartite_or_disconnected",
            Error::NotBinaryTree(_) => "not_binary_tree",
            Error::GreedyStuck { .. } => "greedy_stuck",
            Error::TypesMissing => "types_missing",
            Error::NoCertificate => "no_certificate",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidCertificate(_) => "invalid_certificate",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }

    /// Whether the error is a validation failure of user input.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }

    pub(crate) fn graphon(position: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidGraphon {
            position: position.into(),
            message: message.into(),
        }
    }

    pub(crate) fn config(position: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            position: position.into(),
            message: message.into(),
        }
    }
}
