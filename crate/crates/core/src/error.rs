use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("order of zero undefined")]
    OrderOfZero,
    #[error("discriminant of a constant polynomial")]
    ConstantPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero operator has no degree")]
    ZeroOperator,
    #[error("expected a polynomial, got a rational function with denominator {0}")]
    NotPolynomial(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("seed not an eigenfunction of T: Ricatti residual {0} is not constant")]
    NotEigenfunction(String),
    #[error("chain step {step}: {reason}")]
    ChainStep { step: usize, reason: String },
    #[error("degenerate transformed seed at step {0}: seed is proportional to an earlier one")]
    DegenerateSeed(usize),
    #[error("dependent seeds {0} and {1}: Wronskian vanishes")]
    DependentSeeds(usize, usize),
    #[error("not natural for given eta: {0}")]
    NotNatural(String),
    #[error("r fails natural form: residual {0}")]
    NaturalR(String),
    #[error("not a reduced exceptional form: residual {0}")]
    NotReduced(String),
    #[error("not regular singular at {0}")]
    NotRegularSingular(String),
    #[error("no SL-OPS weight: {0}")]
    NoWeight(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("basis is not invariant: {0}")]
    NotInvariant(String),
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
