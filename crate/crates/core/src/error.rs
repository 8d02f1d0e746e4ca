use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision overflow: Q_p * f = {scaled} exceeds the exact-floor cap 2^53")]
    PrecisionOverflow { scaled: f64 },

    #[error("mismatched quantization configs: {0}")]
    MismatchedConfig(String),

    #[error("negative objective value {0}; shift the objective onto [0, inf)")]
    NegativeObjective(f64),

    #[error("tour length {tour} does not match instance size {instance}")]
    LengthMismatch { tour: usize, instance: usize },

    #[error("city index {index} out of range for {n} cities")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid 2-opt move ({i}, {j}) for a tour of {n} cities")]
    InvalidMove { i: usize, j: usize, n: usize },

    #[error("instance too large for brute force: {0} cities (max 10)")]
    TooLarge(usize),

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("objective undefined at x = {0}")]
    Domain(f64),

    #[error("trajectory diverged at step {step}: |x| = {norm} > guard radius {radius}")]
    Divergence { step: usize, norm: f64, radius: f64 },

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("schema mismatch in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("audit found {0} problem(s)")]
    AuditFailed(usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Config problems map to exit code 2 in the CLI, everything else to 1.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::InvalidArgument(_))
    }
}
