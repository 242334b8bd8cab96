use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a non-unit")]
    DivisionByNonUnit,
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("malformed scalar {0:?}")]
    MalformedScalar(String),
    #[error("value {value} does not lie in {ring}")]
    OutOfRing { value: String, ring: String },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("span is not a pure direct summand")]
    ImpureSpan,
    #[error("vectors do not form a basis")]
    NotABasis,
    #[error("image of e is not contained in the image of f")]
    NotNested,
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("perturbation must satisfy z^2 = 0 and ez + ze = z")]
    BadPerturbation,
    #[error("matrix is injective")]
    Injective,
    #[error("vectors are linearly independent")]
    Independent,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("kernel has rank {0}, at least 2 required")]
    KernelTooSmall(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("construction failure: {0}")]
    ConstructionFailure(String),
    #[error("matrix is not singular")]
    NotSingular,
    #[error("coefficient ring is not a field")]
    NotAField,
    #[error("wrong coefficient ring: expected {expected}, found {found}")]
    WrongRing { expected: String, found: String },
    #[error("all blocks are invertible")]
    AllInvertible,
    #[error("element {0} is a unit")]
    UnitInput(usize),
    #[error("no split satisfying the height-sum condition exists for element {0}")]
    HypothesisFailed(usize),
    #[error("monoid too large: {0} table entries exceed the feasibility guard")]
    TooLarge(u128),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
