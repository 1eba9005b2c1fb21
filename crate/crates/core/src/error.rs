use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cyclic factor {0} is smaller than 2")]
    FactorTooSmall(u64),

    #[error("group order overflows the supported index range")]
    OrderOverflow,

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("coordinate {value} at position {position} is outside [0, {modulus})")]
    CoordinateOutOfRange {
        position: usize,
        value: u64,
        modulus: u64,
    },

    #[error("duplicate element at line {line}")]
    DuplicateElement { line: usize },

    #[error("duplicate element in subset")]
    DuplicateInSubset,

    #[error("set file line {line}: {reason}")]
    SetFileSyntax { line: usize, reason: String },

    #[error("the subset is empty")]
    EmptySet,

    #[error("dilation factor must be at least 1")]
    ZeroDilation,

    #[error("h = {h} is outside the supported range [{min}, {max}]")]
    HOutOfRange { h: u32, min: u32, max: u32 },

    #[error(
        "{combinations} combinations exceed the guard of {guard}; \
         use the counting method instead"
    )]
    CombinationGuardExceeded { combinations: u128, guard: u64 },

    #[error("the fast convolution path cannot represent this product exactly")]
    FastPathUnavailable,

    #[error("this audit requires odd group order, got {0}")]
    EvenOrder(u64),

    #[error("this operation requires group order at least {min}, got {got}")]
    OrderTooSmall { got: u64, min: u64 },

    #[error("alpha = {alpha} does not exceed the positive root for h = {h}")]
    DensityBelowRoot { h: u32, alpha: f64 },

    #[error("alpha = {0} is outside (0, 1]")]
    DensityOutOfRange(f64),

    #[error("k = {k} is below the required minimum {min} for h = {h}")]
    SizeBelowMinimum { h: u32, k: u64, min: u64 },

    #[error("arc length d must be odd and at least 3, got {0}")]
    BadArcLength(u64),

    #[error("weight {value} at position {position} is outside [0, {max}]")]
    WeightOutOfRange {
        position: usize,
        value: u64,
        max: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
