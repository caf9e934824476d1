use crate::classify::Degeneracy;
use crate::domain::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(ValidationReport),

    #[error("instance too large for exact solver: {agents} agents exceeds the cap of {cap}")]
    TooLarge { agents: usize, cap: usize },

    #[error("domain is degenerate ({0}); the query is undefined on degenerate domains")]
    Degenerate(Degeneracy),

    #[error("domain is not a tree (the graph contains a cycle)")]
    NotATree,

    #[error("agent {agent} is out of range for a game with {agents} agents")]
    AgentOutOfRange { agent: usize, agents: usize },

    #[error("agent {0} is not a member of the coalition")]
    NotAMember(usize),

    #[error("invalid imputation: {0}")]
    InvalidImputation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
