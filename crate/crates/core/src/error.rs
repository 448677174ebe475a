use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The input produced more structures than the caller allowed. This is
    /// the robust abort: the input is outside the class the budget was
    /// sized for, and no partial answer is returned.
    #[error("budget exceeded: more than {limit} {what}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("{what} is limited to {limit} vertices, got {n}")]
    SizeLimit { what: &'static str, n: usize, limit: usize },

    #[error("graph must be connected")]
    Disconnected,

    #[error("no feasible solution")]
    Infeasible,

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("unsupported property: {0}")]
    UnsupportedProperty(String),

    #[error("internal error: {0}")]
    Internal(String),
}
