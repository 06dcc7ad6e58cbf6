use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enclosure could not be certified within {bits} bits of precision")]
    PrecisionExhausted { bits: u32 },
    #[error("enumeration of {size} candidates exceeds the cap of {cap}")]
    InfeasibleEnumeration { size: String, cap: u64 },
    #[error("an irrational number is required, got {0}")]
    IrrationalRequired(String),
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: String, b: String },
    #[error("x^2 - {0}*y^2 = 1 is not a trivial case (c > 0 and not a perfect square)")]
    NonTrivialCase(String),
    #[error("{0} is a perfect square; use the trivial Pell solver")]
    SquareInput(String),
    #[error("bound 1/(g_(N+1) - 1) is undefined because g_(N+1) = 1")]
    DegenerateBound,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("lcm(1..{n}) exceeds 3^{n}")]
    V3BoundFailed { n: u64 },
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Failures caused by resource limits rather than by the input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. } | Error::InfeasibleEnumeration { .. }
        )
    }
}
