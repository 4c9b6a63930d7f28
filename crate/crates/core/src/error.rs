use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid security parameter: {0}")]
    InvalidParam(String),

    #[error("permutation is not in {class}")]
    NotInClass { class: String },

    #[error("control value {control} out of range for modulus {m}")]
    ControlOutOfRange { control: u32, m: u32 },

    #[error("control modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u32, found: u32 },

    #[error("state is not normalised (norm^2 = {0})")]
    NotNormalised(f64),

    #[error("control register is not in |0> and cannot be discarded")]
    ControlEntangled,

    #[error("node {node} out of range for a graph with {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },

    #[error("graph has {count} nodes, above the search limit {limit}")]
    NodeLimitExceeded { count: usize, limit: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("promise violation: {0}")]
    PromiseViolation(String),

    #[error("key copy already consumed")]
    KeyCopyConsumed,

    #[error("mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: String, found: String },

    #[error("symbol {s} out of range for modulus {m}")]
    SymbolOutOfRange { s: u32, m: u32 },

    #[error("parse error ({what}): {msg}")]
    Parse { what: &'static str, msg: String },
}

impl Error {
    pub(crate) fn parse(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Parse {
            what,
            msg: msg.into(),
        }
    }
}
