use thiserror::Error;

/// Errors across the workbench. Variant names follow the per-operation
/// contracts; `InvariantViolation` is reserved for conditions that indicate an
/// internal inconsistency (e.g. a non-split tensor minimal vector) rather than
/// bad input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field spec parse error: {0}")]
    SpecParse(String),
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("minimal polynomial has {0} real roots, need {1}: field is not totally real")]
    NotTotallyReal(usize, usize),
    #[error("listed unit {0} has |norm| != 1")]
    BadUnit(String),
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("signature of the zero element is undefined")]
    ZeroElement,
    #[error("enumeration box has an unbounded side")]
    UnboundedBox,
    #[error("root-interval refinement exhausted the {0}-bit precision cap")]
    PrecisionExhausted(u32),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not positive semidefinite")]
    NotSemidefinite,
    #[error("tensor product of two non-classical forms is not integral")]
    BothNonClassical,
    #[error("{0} is not in the codifferent: some Tr(delta*w^i*w^j) is not an integer")]
    NotInCodifferent(String),
    #[error("element is not totally positive")]
    NotTotallyPositive,
    #[error("element is not totally nonnegative")]
    NotTotallyNonnegative,
    #[error("element is not integral")]
    NotIntegral,
    #[error("no totally positive codifferent generator: listed units realize no matching signature")]
    NoTotallyPositiveGenerator,
    #[error("rank {0} exceeds the k(r) = 1 regime (r <= 5)")]
    RankTooLarge(usize),
    #[error("form is not classical")]
    NotClassical,
    #[error("degree {0} is outside the supported set {{2,3,4,5,7}}")]
    UnsupportedDegree(usize),
    #[error("codifferent is not principal")]
    NonPrincipalCodifferent,
    #[error("class representative {0} is not represented by the base form")]
    ClassNotRepresented(String),
    #[error("witness does not evaluate to the claimed value")]
    WitnessInvalid,
    #[error("prime element search above p={0} exhausted its box cap")]
    PrimeSearchExhausted(u64),
    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
