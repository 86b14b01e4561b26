use thiserror::Error;

use crate::expr::ParseError;
use crate::weyl::DiffOp;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable sets differ")]
    VarSetMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable set: {0}")]
    InvalidVarSet(String),
    #[error("cannot differentiate with respect to `{0}`: it carries a negative exponent")]
    NegativeExponentDerivative(String),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("`{0}` is zero but carries a negative exponent")]
    ZeroToNegativePower(String),
    #[error("negative exponent on `{0}`, which is not a Laurent parameter")]
    NegativeExponent(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("[{left}, {right}] leaves the span of the generators; residual {residual}")]
    NotClosedRealization {
        left: String,
        right: String,
        residual: Box<DiffOp>,
    },
    #[error("[{left}, {right}] leaves the span; residual {residual}")]
    NotClosed {
        left: String,
        right: String,
        residual: String,
    },
    #[error("linearly dependent input: {0}")]
    LinearlyDependentInput(String),
    #[error("basis change is singular: {0}")]
    SingularBasisChange(String),
    #[error("{element} is not an eigenvector of ad({operator}); residual {residual}")]
    NotEigenvector {
        operator: String,
        element: String,
        residual: String,
    },
    #[error("{element} is not homogeneous for the grading")]
    NotHomogeneous { element: String },
    #[error("[{operator}, {member}] is not proportional to {target}; residual {residual}")]
    NotProportional {
        operator: String,
        member: String,
        target: String,
        residual: String,
    },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("search needs at least {needed} candidate monomials, above the cap of {cap}")]
    TooManyMonomials { needed: usize, cap: usize },
    #[error("malformed candidate: {0}")]
    MalformedCandidate(String),
    #[error("fixture `{name}`: {message}")]
    Fixture { name: String, message: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn fixture(name: &str, message: impl std::fmt::Display) -> Self {
        Error::Fixture {
            name: name.to_string(),
            message: message.to_string(),
        }
    }
}
