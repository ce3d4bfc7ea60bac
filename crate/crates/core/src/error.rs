//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("generator is not an automorphism of the graph")]
    NotAnAutomorphism,

    #[error("node cap exceeded: graph has {nodes} nodes, cap is {cap}")]
    NodeCapExceeded { nodes: usize, cap: usize },

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("degenerate input: no positive examples")]
    NoPositives,

    #[error("degenerate input: no negative examples")]
    NoNegatives,

    #[error("insufficient negatives: need {need}, have {have}")]
    InsufficientNegatives { need: u64, have: u64 },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("degenerate trial: {0}")]
    DegenerateTrial(String),
}

impl Error {
    /// True for the P=0 / N=0 cases where bound formulas are undefined.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::NoPositives | Error::NoNegatives)
    }

    /// True for resource/budget refusals (node caps, oracle budgets).
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::NodeCapExceeded { .. } | Error::BudgetExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
