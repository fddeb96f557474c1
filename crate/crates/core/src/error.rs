use thiserror::Error;

use crate::rat::RatVec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A rational literal or input document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Operand shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A caller-side contract was broken (empty index set, dependent face, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A mathematical precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Exhaustive enumeration refuses inputs beyond the desk-scale limit.
    #[error("{cols} columns exceed the limit of {limit}")]
    TooLarge { cols: usize, limit: usize },

    /// The supplied dual vector is feasible but not optimal.
    #[error("dual vector is not optimal: u - t·xi improves the dual objective for small t > 0, xi = {xi}")]
    NotDualOptimal { xi: RatVec },

    /// The market admits an arbitrage strategy.
    #[error("market admits arbitrage: strategy {strategy} has semipositive gains")]
    Arbitrage { strategy: RatVec },

    /// An exact postcondition failed; indicates a bug, never a property of the input.
    #[error("internal error: {0}")]
    Internal(String),
}
