use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("integer overflow during exact arithmetic")]
    Overflow,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("hypothesis ({condition}) failed: {detail}")]
    Hypothesis { condition: char, detail: String },
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("ring axiom violated: {0}")]
    Axiom(String),
    #[error("functor is not reduced: {0}")]
    NotReduced(String),
    #[error("transitive isotropy at orbit of point {point}")]
    TransitiveIsotropy { point: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
