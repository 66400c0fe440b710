use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("complex is not pure: {0}")]
    NotPure(String),
    #[error("invalid top-face distribution: {0}")]
    BadDistribution(String),
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("{what} = {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },
    #[error("face {0} is not in the complex")]
    FaceNotInComplex(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("link of {0} has a disconnected 1-skeleton")]
    DisconnectedLink(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("expected a {expected}-dimensional complex, got dimension {actual}")]
    WrongDimension { expected: isize, actual: isize },
    #[error("bad start state: {0}")]
    BadStart(String),
    #[error("exchange property fails: {0}")]
    NoExchange(String),
    #[error("not a matroid: {0}")]
    NotMatroid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: impl Into<i64>, lo: i64, hi: i64) -> Self {
        Error::OutOfRange {
            what,
            value: value.into(),
            range: format!("[{lo}, {hi}]"),
        }
    }
}
