use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex set {0} is not closed")]
    NotClosed(String),

    #[error("vertex set {sub} is not contained in {sup}")]
    NotSubset { sub: String, sup: String },

    #[error("{0} is not a simplex")]
    NotSimplex(String),

    #[error("word support {support} is not contained in {allowed}")]
    SupportViolation { support: String, allowed: String },

    #[error("words belong to different groups")]
    GroupMismatch,

    #[error("word is not cyclically minimal")]
    NotCyclicallyMinimal,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrices carry different patterns")]
    PatternMismatch,

    #[error("matrix is not a member of S_Y: {0}")]
    NotMember(String),

    #[error("matrix is not invertible over the integers")]
    NotUnimodular,

    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,

    #[error("map is not an endomorphism: images of commuting {0} and {1} do not commute")]
    NotEndomorphism(String, String),

    #[error("map does not stabilise the closure lattice: {0}")]
    NotStabiliser(String),

    #[error("illegal generator atom: {0}")]
    IllegalAtom(String),

    #[error("{0} is not a connected component of the graph minus the orthogonal complement of {1}")]
    NotComponent(String, String),

    #[error("automorphism is not in the conjugate-stabiliser: no witness for {0}")]
    NotConjugateStabiliser(String),

    #[error("invalid tie-break order: {0}")]
    InvalidTieBreak(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
