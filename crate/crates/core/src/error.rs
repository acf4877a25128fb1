use thiserror::Error;

/// Errors raised by the relation, coloring and tree machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {message}")]
    MalformedInput { line: usize, message: String },

    #[error("vertex {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("not a quasi-order: {0}")]
    NotQuasiOrder(String),

    #[error("not a graph: {0}")]
    NotGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pair ({0}, {1}) is not an edge of the auxiliary graph")]
    NotInAuxGraph(usize, usize),

    #[error("vertex set {0:?} is not an antichain")]
    NotAntichain(Vec<usize>),

    #[error("expected a set of cardinality {expected}, got {got}")]
    WrongCardinality { expected: usize, got: usize },

    #[error("vertex set {0:?} is not independent")]
    NotIndependent(Vec<usize>),

    #[error("proposition `{name}` violated: {detail}")]
    PropositionViolated { name: String, detail: String },

    #[error(
        "hypothesis violated: set {family_member:?} is disjoint from {partial:?} and admits no independent extension"
    )]
    HypothesisViolated {
        partial: Vec<usize>,
        family_member: Vec<usize>,
    },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("borel code has no leaf set for sequence {0}")]
    MissingLeaf(String),
}

pub type Result<T> = std::result::Result<T, Error>;
