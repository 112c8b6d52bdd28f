use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("element {element} out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },

    #[error("the given element set is not a subgroup")]
    NotASubgroup,

    #[error("index arithmetic overflow building a product of orders {left} and {right}")]
    IndexOverflow { left: usize, right: usize },

    #[error("search exceeded its budget of {limit} nodes")]
    SearchBudgetExceeded { limit: u64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("listed elements do not generate the group")]
    NotGenerating,

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),

    #[error("duplicate label {0}")]
    DuplicateLabel(String),

    #[error("unknown label {0}")]
    UnknownLabel(String),

    #[error("duplicate edge {label}: {from} -> {to}")]
    DuplicateEdge { label: String, from: String, to: String },

    #[error("morphism check failed: {0}")]
    MorphismCheckFailed(String),

    #[error("tree arms must be pairwise distinct positive integers, got {0:?}")]
    ArmsNotDistinct((usize, usize, usize)),

    #[error("no tree assigned to label {0}")]
    MissingTree(String),

    #[error("degree separation violated: vertex {vertex} has degree {degree} (need at least 4)")]
    DegreeSeparationViolated { vertex: String, degree: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("digraph is not strongly connected")]
    NotStronglyConnected,

    #[error("digraph must have at least two vertices")]
    FewerThanTwoVertices,

    #[error("digraph has a loop at vertex {0}")]
    HasLoop(usize),

    #[error("degree overflow: {0}")]
    DegreeOverflow(String),

    #[error("polynomials belong to different presentations")]
    MixedPresentation,

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("morphism does not commute with the differentials at generator {0}")]
    CommutationFailed(String),

    #[error("vertex map is not a digraph homomorphism: edge {0:?} is not preserved")]
    NotAHomomorphism((usize, usize)),

    #[error("presentations use different connectivity parameters ({0} vs {1})")]
    ParameterMismatch(u64, u64),

    #[error("parse error: {0}")]
    Parse(String),
}
