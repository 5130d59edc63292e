use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {node}: cell {cell} is not in the candidate set")]
    NotCandidate { node: usize, cell: usize },

    #[error("association has {got} entries, scenario has {expected} nodes")]
    AssociationLength { expected: usize, got: usize },

    #[error("subset must be non-empty")]
    EmptySubset,

    #[error("subset does not contain every node whose association differs (node {0})")]
    SubsetMissesChange(usize),

    #[error("node {0}: no candidate has a finite load")]
    NoFiniteCandidate(usize),

    #[error("initial association is infeasible")]
    InfeasibleInitial,

    #[error("no feasible association exists")]
    NoFeasibleAssociation,

    #[error("search space of {0} associations exceeds the limit of {1}")]
    SearchSpaceTooLarge(u128, u128),

    #[error("scenario file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
