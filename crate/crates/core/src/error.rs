use alloc::string::String;

/// Errors raised when an operation's preconditions do not hold.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("gadget `{gadget}` has no state `{state}`")]
    UnknownState { gadget: String, state: String },

    #[error("gadget `{gadget}` has no location `{location}`")]
    UnknownLocation { gadget: String, location: String },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("configuration budget must be at least 1")]
    ZeroBudget,

    #[error("configuration budget of {0} exceeded")]
    BudgetExceeded(usize),
}
