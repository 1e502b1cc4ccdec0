use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed order: {0}")]
    MalformedOrder(String),

    #[error("{kind} index {index} out of range (count {len})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid resource {resource}: {reason}")]
    InvalidResource { resource: String, reason: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("negative value {value} at {location}")]
    NegativeValue { location: String, value: String },

    #[error("instance too large: {mappings} mappings exceed limit {limit}")]
    InstanceTooLarge { mappings: String, limit: u64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("empty range for {field}: {lo}..{hi}")]
    EmptyRange { field: String, lo: u64, hi: u64 },

    #[error("invalid range for {field}: {reason}")]
    InvalidRange { field: String, reason: String },

    #[error("arithmetic overflow in exact time value")]
    Overflow,
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
