use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested turn index does not exist for paths with `n` up-steps.
    #[error("turn index s={s} out of range for N={n} (need 1 <= s <= N)")]
    TurnOutOfRange { s: u32, n: u32 },

    /// Division by a series whose lowest term is not a single monomial.
    #[error("series is not divisible: {0}")]
    NotDivisible(String),

    /// A computed quantity violated a structural guarantee; this is a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("work bound exceeded: {count} paths > bound {bound}")]
    WorkBoundExceeded { count: String, bound: u64 },
}
