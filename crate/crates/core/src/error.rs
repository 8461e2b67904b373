use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Reasons a model document can be rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("odd number of generators ({0}); symplectic models need an even count")]
    OddDimension(usize),
    #[error("too many generators ({0}); at most {max} are supported", max = crate::algebra::MAX_GENERATORS)]
    TooManyGenerators(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    #[error("bad coefficient `{0}`")]
    BadCoefficient(String),
    #[error("model fails validation: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("mixed degrees: expected {expected}, found {found}")]
    MixedDegree { expected: usize, found: usize },
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("unknown model `{name}`; available: {available}")]
    UnknownModel { name: String, available: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("star operator degenerate in degree {degree}")]
    DegenerateStar { degree: usize },
    /// An internal identity failed; this signals a bug, not bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::DegenerateStar { .. })
    }
}
