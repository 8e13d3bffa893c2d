use thiserror::Error;

/// Crate-wide error type. Variants map one-to-one onto the stable error
/// codes exposed by the CLI.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("edge length {0} is not positive")]
    NonPositiveLength(String),
    #[error("alpha is not generic: subset {{{}}} balances its complement", fmt_indices(.witness))]
    NonGenericAlpha { witness: Vec<usize> },
    #[error("need at least 3 edges, got {0}")]
    TooFewEdges(usize),
    #[error("cannot parse rational: {0:?}")]
    ParseError(String),
    #[error("ambient sizes differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset is the full ground set")]
    FullSubset,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("monomial budget exceeded: {count} monomials at degree {degree} (budget {budget})")]
    DegreeBoundExceeded {
        degree: usize,
        count: usize,
        budget: usize,
    },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is not divisible by {0}")]
    NotDivisible(String),
    #[error("subset {{{}}} is not short", fmt_indices(.0))]
    NotShort(Vec<usize>),
    #[error("subset must have at least {needed} elements, got {got}")]
    SubsetTooSmall { needed: usize, got: usize },
    #[error("the index 1 must belong to the subset (relabel first)")]
    RequiresOneInS,
    #[error("subset must be a proper subset of {{2,...,n}}")]
    NotProper,
    #[error("index {0} is out of range for this operation")]
    IndexOutOfRange(usize),
    #[error("claim violated: {0}")]
    ClaimViolation(String),
    #[error("normalized intersection form requires n = 5 and |S| = 2")]
    NotASurface,
    #[error("top-degree slice of the quotient is {0}-dimensional, expected 1")]
    DegenerateTopDegree(usize),
    #[error("basis classes are not linearly independent in the quotient")]
    BasisNotIndependent,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("polygon-pair condition ({index}) violated: residual {residual:e}")]
    ConditionViolated { index: usize, residual: f64 },
    #[error("the vector w vanishes")]
    ZeroW,
    #[error("group element has near-zero determinant")]
    SingularGroupElement,
    #[error("io error: {0}")]
    Io(String),
}

fn fmt_indices(v: &[usize]) -> String {
    v.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl Error {
    /// CLI exit code: 2 signals a failed paper identity, 1 everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ClaimViolation(_) => 2,
            _ => 1,
        }
    }
}
