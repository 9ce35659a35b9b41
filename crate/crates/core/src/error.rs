use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("incompatible cyclotomic orders {0} and {1}")]
    IncompatibleOrders(u64, u64),
    #[error("root order {0} does not divide field order {1}")]
    RootOrder(u64, u64),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("duplicate branch: {0} and {1} define the same branch")]
    DuplicateBranch(String, String),
    #[error("empty branch list")]
    EmptyCurve,
    #[error("unknown branch {0}")]
    UnknownBranch(String),
    #[error("point {0} is not in the tree")]
    PointNotInTree(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
