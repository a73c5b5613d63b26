use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("input polynomial is constant")]
    ConstantInput,
    #[error("subalgebra generator is constant")]
    ConstantGenerator,
    #[error("pair is algebraically dependent (zero Jacobian)")]
    DependentPair,
    #[error("endomorphism is not injective (zero Jacobian)")]
    NonInjective,
    #[error("polynomial and basis use different monomial orders")]
    OrderMismatch,
    #[error("degree {d} does not divide {degree}")]
    DegreeMismatch { d: u32, degree: u32 },
    #[error("polynomial is not in the subalgebra generated by the certificate")]
    NotInRetract,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Parse errors are input-format errors; everything else is a violated precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
