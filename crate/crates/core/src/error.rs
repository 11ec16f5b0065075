use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer exponent beta = {0} degenerates the power-law family")]
    IntegerExponent(f64),
    #[error("exponent beta = {0} must exceed 1")]
    ExponentTooSmall(f64),
    #[error("cutoff k = {k} is below ceil(beta) = {min} so the family mixes signs")]
    CutoffTooSmall { k: usize, min: usize },
    #[error("depth {depth} is below the cutoff {k}")]
    DepthBelowCutoff { depth: usize, k: usize },
    #[error("probability {0} outside {1}")]
    Probability(f64, &'static str),
    #[error("argument x = {0} outside [-1, 1]")]
    GenfunDomain(f64),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("spectrum depths differ ({0} vs {1})")]
    DepthMismatch(usize, usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
