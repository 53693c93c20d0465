use thiserror::Error;

/// Errors surfaced by the library.
///
/// `BudgetExceeded` and `Guard` mark resource guards (the computation was
/// refused, not wrong); everything else is a caller or input problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("enumeration budget exceeded: {needed} candidate subsets > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("guard violation: {0}")]
    Guard(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for resource-guard refusals (enumeration budgets, toy-scale
    /// oracle limits), as opposed to invalid inputs.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Guard(_))
    }
}
