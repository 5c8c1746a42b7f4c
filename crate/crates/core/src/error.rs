use thiserror::Error;

/// Errors raised by the kernel.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("edge {0} is a frontier edge")]
    FrontierEdge(usize),

    #[error("edge {0} is not flippable: both sides lie in one triangle")]
    NotFlippable(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("region is not simply connected: {0}")]
    RegionNotDisk(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("TT not achievable: {0}")]
    TtNotAchievable(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded(_) => 3,
            Error::TtNotAchievable(_) | Error::Numerical(_) | Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
