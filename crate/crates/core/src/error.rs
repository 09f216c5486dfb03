use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("malformed walk at step {index}: {reason}")]
    MalformedWalk { index: usize, reason: String },

    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A proved invariant failed to hold. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("oracle budget exceeded: {0}")]
    Budget(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by this crate.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Invariant(format!($($fmt)+)));
        }
    };
}

pub(crate) use ensure;
