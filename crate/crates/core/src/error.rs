use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division leaves a remainder")]
    NotDivisible,
    #[error("pole at n = {0}")]
    Pole(String),
    #[error("partial fractions need linear factors, got {0}")]
    NonlinearFactor(String),
    #[error("supplied factors do not divide the denominator")]
    FactorsDoNotDivide,
    #[error("cannot add multiples of pi^{left} and pi^{right}")]
    MixedPiPowers { left: u32, right: u32 },

    #[error("I_{a}^{b} is the logarithmic case 2a - b - 1 = 0")]
    LogarithmicIntegral { a: u32, b: u32 },
    #[error("I_{a}^{b} diverges (2a - b - 1 < 0)")]
    DivergentIntegral { a: u32, b: u32 },
    #[error("I_{from_a}^{from_b} / I_{to_a}^{to_b} is not rational")]
    NoRationalRatio {
        from_a: u32,
        from_b: u32,
        to_a: u32,
        to_b: u32,
    },
    #[error("I_{to_a}^{to_b} is not reachable from I_{from_a}^{from_b} through the recurrences")]
    Unreachable {
        from_a: u32,
        from_b: u32,
        to_a: u32,
        to_b: u32,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("the zero polynomial has no sign")]
    ZeroPolynomial,
    #[error("denominator vanishes on the ray n >= {0}")]
    PoleOnRay(String),
    #[error("sign changes on the ray n >= {n0}: {detail}")]
    SignChange { n0: String, detail: String },
    #[error("square root of a negative rational")]
    NegativeRadicand,
    #[error("discriminant is not positive at omega = {omega}, k = {k}, n = {n}")]
    NonPositiveDiscriminant { omega: u32, k: u32, n: u64 },
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),
    #[error("certificate replay failed: {0}")]
    Replay(String),
    #[error("crosscheck disagreement: {0}")]
    Disagreement(String),
}
