use thiserror::Error;

use crate::poly::IntPoly;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("constant coefficient is zero; strip powers of t first")]
    ZeroConstantTerm,
    #[error("polynomial has odd degree {0}; skew-reciprocity needs even degree")]
    OddDegree(usize),
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not reciprocal")]
    NotReciprocal,
    #[error("polynomial is not skew-reciprocal")]
    NotSkewReciprocal,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor leading coefficient {0} is not a unit")]
    NonUnitLeadingCoefficient(String),
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("target degree {target} is below current degree {current}")]
    TargetDegreeTooSmall { target: usize, current: usize },
    #[error("degree {0} is not of the form 2^(i+1) with i >= 1")]
    InvalidDegree(usize),
    #[error("polynomial is Kronecker (all roots on the unit circle or zero)")]
    KroneckerInput,
    #[error("tolerance {0} is not a finite value in [1e-14, 1]")]
    InvalidTolerance(f64),
    #[error("precision exhausted at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("estimated enumeration {estimated} exceeds budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },
    #[error("matrix is not square of even size")]
    InvalidMatrix,
    #[error("low-half coefficients violate the skew sign formula")]
    SignFormulaMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    /// The structural lemma would be contradicted; carries the offending polynomial.
    #[error("lemma falsified by {0}")]
    LemmaFalsified(IntPoly),
}

pub type Result<T> = std::result::Result<T, Error>;
