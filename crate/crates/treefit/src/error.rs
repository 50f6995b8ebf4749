use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("vertex {0} is an escape vertex")]
    IsEscapeVertex(usize),
    #[error("separator sides would be empty")]
    TooSmall,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("vertex {0} has too few expanding neighbors")]
    NotEnoughExpanding(usize),
    #[error("tree is separable")]
    TreeIsSeparable,
    #[error("construction stuck: {0}")]
    Stuck(String),
    #[error("set is not preserving: vertex {0} lacks non-neighbors")]
    NotPreserving(usize),
    #[error("budget exceeded")]
    BudgetExceeded,
    #[error("invalid 3-partition instance: {0}")]
    InvalidThreePartition(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn pre(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(msg()))
    }
}
