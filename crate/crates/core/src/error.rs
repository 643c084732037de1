use thiserror::Error;

/// Errors raised by the measurement and generation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} outside the supported range 2..=30")]
    DimensionOutOfRange(u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} has degree zero")]
    IsolatedVertex(usize),
    #[error("{0} did not converge")]
    NonConvergence(&'static str),
    #[error("not a subgraph: edge {endpoint}-{dir} open in the smaller graph only")]
    NotSubgraph { endpoint: u32, dir: u32 },
    #[error("malformed snapshot: {0}")]
    Snapshot(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
