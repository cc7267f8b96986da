use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("invalid mass function: {0}")]
    InvalidMass(String),

    #[error("masses sum to {sum}, expected 1")]
    MassSum { sum: String },

    #[error("complete conflict: no focal pair has a non-empty intersection")]
    CompleteConflict,

    #[error("invalid likelihood: {0}")]
    InvalidLikelihood(String),

    #[error("invalid gamble: {0}")]
    InvalidGamble(String),

    #[error("invalid IM table: {0}")]
    InvalidTable(String),

    #[error("{what} count {count} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        count: u128,
        cap: u128,
    },

    #[error("invalid interval prior: {0}")]
    InvalidIntervalPrior(String),

    #[error("complete conflict at y = {y}: every sampled focal interval misses the data interval")]
    ConflictAtData { y: f64 },

    #[error("invalid simulation input: {0}")]
    InvalidSimulation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Parse(#[from] crate::io::ParseError),

    #[error("i/o error: {0}")]
    Io(String),
}
