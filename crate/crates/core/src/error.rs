use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("invalid translation gain {0}: must be > 0")]
    InvalidGain(f64),

    #[error("invalid scale parameter beta={0}: must be > 0")]
    InvalidScale(f64),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("threshold undefined: probability {0} lies outside the achievable range of the psychometric function")]
    ThresholdUndefined(f64),

    #[error("fit degenerate: {0}")]
    FitDegenerate(String),

    #[error("fit did not converge")]
    NotConverged,

    #[error("bootstrap unreliable: {failed} of {total} refits were degenerate")]
    CiUnreliable { failed: usize, total: usize },

    #[error("chi-square test undefined: a row or column total is zero")]
    ZeroMarginal,

    #[error("no t1 values to summarise")]
    EmptyStatistics,

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
