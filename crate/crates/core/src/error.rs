use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("valuation undefined (infinite) for zero")]
    InfiniteValuation,
    #[error("{0} is not a unit modulo {1}")]
    NotUnit(u64, u64),
    #[error("insufficient precision: need {needed} digits, have {available}")]
    Precision { needed: u32, available: u32 },
    #[error("modulus {p}^{digits} does not fit in 62 bits")]
    ModulusTooLarge { p: u64, digits: u32 },
    #[error("engine configuration mismatch")]
    ConfigMismatch,
    #[error("budget exceeded: {needed} coefficients requested, budget is {budget}")]
    Budget { needed: usize, budget: usize },
    #[error(
        "truncation budget exceeded: depth {depth} needs class at least {depth}, have {class}"
    )]
    TruncationDepth { depth: usize, class: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("identity element has no leading form")]
    IdentityElement,
    #[error("mixed degrees: expected {expected}, found {found}")]
    MixedDegrees { expected: u32, found: u32 },
    #[error("stabilisation did not converge within {0} iterations")]
    NonConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
