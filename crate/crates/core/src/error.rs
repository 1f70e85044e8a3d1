use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("cover relation contains a cycle through {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),

    #[error("cover `{0} -> {1}` is implied by a longer chain")]
    RedundantCover(String, String),

    #[error("`{0}` and `{1}` are not comparable with `{0}` below `{1}`")]
    NotComparable(String, String),

    #[error("poset does not have a unique maximal element")]
    NoUniqueMax,

    #[error("subset is not up-closed: `{0}` is in it but `{1}` above it is not")]
    NotUpClosed(String, String),

    #[error("invalid k = {0}; structures are only defined for k >= 3")]
    InvalidK(usize),

    #[error("poset is not d-complete")]
    NotDComplete,

    #[error("poset has {size} elements, above the limit of {limit} for this operation")]
    TooLarge { size: usize, limit: usize },

    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
