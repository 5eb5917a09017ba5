use thiserror::Error;

/// Errors raised across the library.
///
/// Variants split into two groups: malformed caller input (`Parse`,
/// `InvalidArgument`, `Io`) and violated preconditions or contracts
/// (everything else). Front ends use [`Error::is_bad_input`] to pick an exit
/// status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// Vertex `vertex` has no self-loop and no in-neighbor, so no weight
    /// placement can cover it.
    #[error("linear program infeasible: vertex {vertex} has no in-neighbor")]
    Infeasible { vertex: usize },

    #[error("{0}")]
    Observability(&'static str),

    #[error("graph is not 1-degenerate")]
    NotDegenerate,

    #[error("instance too large: n = {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn is_bad_input(&self) -> bool {
        match self {
            Error::Parse { .. } | Error::InvalidArgument(_) | Error::Io(_) => true,
            Error::AtRound { source, .. } => source.is_bad_input(),
            _ => false,
        }
    }

    pub(crate) fn at_round(self, round: usize) -> Error {
        Error::AtRound {
            round,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
