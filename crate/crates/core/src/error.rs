use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A set handed to an oracle contains an element outside its domain.
    #[error("element {element} is outside the oracle domain")]
    Domain { element: usize },

    /// An exhaustive routine was asked to enumerate more than it is allowed to.
    #[error("{what}: size {size} exceeds the enumeration guard {limit}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// A player program queried or emitted elements it has no access to.
    #[error("player {player} violated the access rules: {detail}")]
    AccessViolation { player: usize, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// Two independent computations of the same quantity did not agree.
    #[error("independent computations disagree: {0}")]
    Disagreement(String),
}

impl Error {
    pub(crate) fn guard(what: &'static str, size: usize, limit: usize) -> Self {
        Error::GuardExceeded { what, size, limit }
    }
}
