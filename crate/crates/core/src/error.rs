use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("field exponent s={0} out of range 1..=16")]
    FieldExponent(u32),
    #[error("polynomial {poly:#b} does not have degree {s}")]
    PolynomialDegree { poly: u32, s: u32 },
    #[error("polynomial {poly:#b} is reducible: divisible by {factor:#b}")]
    Reducible { poly: u32, factor: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {value} is not an element of GF({q})")]
    NotAnElement { value: u32, q: u32 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generator has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("enumeration of {required} items exceeds the guard of {guard}; use sampling instead (raise TLR_GUARD_MAX to override)")]
    GuardExceeded { required: u128, guard: u128 },
    #[error("index {index} out of range 0..{len}")]
    OutOfRange { index: usize, len: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("schedule radius is vacuous at level {level} (alpha = {alpha:e})")]
    VacuousRadius { level: usize, alpha: f64 },
    #[error("random generator stayed rank-deficient after {0} attempts")]
    ResamplingExhausted(usize),
    #[error("inner list recovery of block {block} returned {size} candidates, above the outer list size {limit}")]
    InnerListOverflow { block: usize, size: usize, limit: usize },
    #[error("code is not systematic")]
    NotSystematic,
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for enumeration-guard overflows, which callers usually report
    /// differently from plain validation failures.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}
