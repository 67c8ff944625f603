use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input text. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unsupported {feature}")]
    Unsupported { line: usize, feature: String },

    /// The parsed structure violates an instance invariant.
    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("precedence graph has a cycle through activity {0}")]
    Cycle(String),

    #[error("duplicate activity {0}")]
    DuplicateActivity(String),

    #[error("cannot resolve `{name}`: {reason}")]
    Unresolved { name: String, reason: String },

    /// A schedule does not fit the instance it is checked against
    /// (unknown or missing activities). Distinct from infeasibility.
    #[error("schedule `{label}`: {message}")]
    Structural { label: String, message: String },

    #[error("schedule `{0}` is infeasible")]
    Infeasible(String),

    #[error("activity {activity} demands {demand} of resource {resource}, capacity is {capacity}")]
    Unschedulable {
        activity: String,
        resource: String,
        demand: u32,
        capacity: u32,
    },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
