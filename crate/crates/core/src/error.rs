use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: &'static str, reason: String },

    #[error("hilbert space dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("operator dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("kerr coefficient undefined: big_delta must be nonzero")]
    ChiUndefined,

    #[error("manifold n={n} is empty for this space")]
    EmptyManifold { n: usize },

    #[error("operator couples manifold n={n} to other excitation numbers (drive must be off)")]
    ManifoldLeak { n: usize },

    #[error("eigensolver failed on {dim}x{dim} block: {reason}")]
    EigenSolver { dim: usize, reason: String },

    #[error("trapping state not identified: {0}")]
    TrappingState(String),

    #[error("premise violated: {0}")]
    Premise(String),

    #[error("steady state not unique: {0}")]
    DegenerateSteadyState(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("propagation failed: {0}")]
    Propagation(String),

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(String),

    #[error("config error at line {line}: {reason}")]
    ConfigParse { line: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(key: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key,
            reason: reason.into(),
        }
    }

    /// True for failures caused by bad user input rather than numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::ConfigParse { .. }
                | Error::Config(_)
                | Error::DimensionCap { .. }
                | Error::ChiUndefined
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
