use thiserror::Error;

/// Errors shared by the algebraic layers of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight cap mismatch: {left} vs {right}")]
    CapMismatch { left: u32, right: u32 },

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("expected weight {expected}, found weight {found}")]
    WeightMismatch { expected: u32, found: u32 },

    #[error("generator b{index} exceeds the weight cap {cap}")]
    WeightOverCap { index: u32, cap: u32 },

    #[error("lattice generator has a non-integral coefficient")]
    NonIntegralGenerator,

    #[error("series must have zero constant term")]
    ConstantTerm,

    #[error("series must start with unit leading coefficient")]
    LeadingCoefficient,

    #[error("truncation order {order} exceeds weight cap {cap} + 2")]
    OrderBeyondCap { order: u32, cap: u32 },

    #[error("weight cap {0} outside the supported range 2..=100")]
    CapOutOfRange(u32),

    #[error("element is not in ker Δ")]
    NotInW,

    #[error("degree {0} is out of reach for the configured caps")]
    DegreeOutOfReach(u32),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
