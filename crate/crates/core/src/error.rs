use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("d∘d ≠ 0 in degree {degree} (d_{degree} ∘ d_{next} is nonzero)", next = degree + 1)]
    DiffSquareNonzero { degree: usize },

    #[error("not a chain map: commutation with the differential fails in degree {degree}")]
    NotChainMap { degree: usize },

    #[error("simplicial identity {identity} fails for (i={i}, j={j}) at level {level}")]
    SimplicialIdentity {
        identity: &'static str,
        i: usize,
        j: usize,
        level: usize,
    },

    #[error("not a simplicial map: {operator} does not commute at level {level}")]
    NotSimplicialMap { operator: String, level: usize },

    #[error("normalization failed at level {level}: {reason}")]
    Decomposition { level: usize, reason: String },

    #[error("{structure} axiom '{law}' fails at {location}")]
    Axiom {
        structure: &'static str,
        law: &'static str,
        location: String,
    },

    #[error("quotient has torsion in degree {degree}; a free presentation is required")]
    Torsion { degree: usize },

    #[error("descent failure: {0}")]
    Descent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
