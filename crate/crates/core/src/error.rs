use num_bigint::BigInt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("defining polynomial is not totally real (discriminant {0} <= 0)")]
    NotTotallyReal(BigInt),
    #[error("defining polynomial is reducible over the rationals (root {0})")]
    Reducible(BigInt),
    #[error("trace form of the order is not positive definite")]
    TraceFormNotPositiveDefinite,
    #[error("elements belong to different orders")]
    MixedOrders,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not divisible")]
    NotDivisible,
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("2 is not inert in this order")]
    NotInert,
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("element is not totally positive")]
    NotTotallyPositive,
    #[error("element is not divisible by 2")]
    NotEven,
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no representation of {0} by the Kala-Yatsyna form")]
    KyRepresentationMissing(String),
    #[error("witness does not verify: {0}")]
    InvalidWitness(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("inconsistent equivalence for {0}")]
    InconsistentEquivalence(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TheoremViolation(_)
            | Error::InvalidWitness(_)
            | Error::InconsistentEquivalence(_)
            | Error::KyRepresentationMissing(_) => 1,
            Error::UnsupportedOrder(_) | Error::NotInert => 3,
            _ => 2,
        }
    }
}
