use thiserror::Error;

/// Errors produced anywhere in the bound pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("invalid group data: {0}")]
    Group(String),

    #[error("generating set is not closed under inverses: {0}")]
    NotSymmetric(String),

    #[error("triangle presentation violates axiom ({axiom}): {detail}")]
    TriangleAxiom { axiom: char, detail: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("value outside the formula's domain: {0}")]
    Domain(String),

    #[error("inconsistent problem data: {0}")]
    Inconsistent(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("solution violates constraint for `{element}` by {violation:e}")]
    Infeasible { element: String, violation: f64 },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("certificate rejected: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
