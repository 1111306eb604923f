use alloc::string::String;

/// Errors raised by the solver core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("triplet ({lo}, {mid}, {hi}) violates lo <= mid <= hi")]
    OrderViolation { lo: f64, mid: f64, hi: f64 },
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("operand has a negative left extreme")]
    NegativityViolation,
    #[error("instance has no demand points")]
    EmptyInstance,
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("unknown facility index {0}")]
    UnknownFacility(usize),
    #[error("candidate solution is infeasible: {0}")]
    InfeasibleCandidate(String),
    #[error("weight set is empty")]
    EmptyWeightSet,
    #[error("{facilities} facilities exceed the enumeration cap of {cap}")]
    TooLarge { facilities: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
