use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {0} appears more than once")]
    DuplicateVertex(usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("operation requires a graph with at least one vertex")]
    EmptyGraph,

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("edge list: {0}")]
    EdgeList(String),

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph is not a forest")]
    NotAForest,

    #[error("invalid roots: {0}")]
    InvalidRoots(String),

    #[error("not a partition of the vertex set: {0}")]
    NotAPartition(String),

    #[error("graph on {n} vertices exceeds the size limit {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("enumeration of {required} maps exceeds the budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("supports overlap at vertex {0}")]
    OverlappingSupports(usize),

    #[error("magic unitary is not adapted to the graph")]
    NotAdapted,

    #[error("not a quantum isomorphism between the given graphs")]
    NotQuantumIso,

    #[error("positivity graph has no perfect matching (tolerance misconfigured?)")]
    NoPerfectMatching,

    #[error("non-integral Lovász term: {numerator} / {denominator}")]
    NonIntegralTerm { numerator: u128, denominator: u128 },

    #[error("expression parse error at byte {pos}: {msg}")]
    ExprParse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
