use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("building index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("fit rejected at delta_h = {delta_h} m: {reason}")]
    FitRejected { delta_h: f64, reason: String },

    #[error("dataset has {got} records, need at least {need}")]
    TooFewRecords { got: usize, need: usize },

    #[error("training diverged (cost not finite at epoch {epoch}); lower {hyperparameter}")]
    Diverged { epoch: usize, hyperparameter: &'static str },

    #[error(
        "inconsistent environment: building width {width:.3} m does not fit grid pitch {pitch:.3} m (alpha = {alpha}, beta = {beta})"
    )]
    InconsistentEnvironment {
        alpha: f64,
        beta: f64,
        width: f64,
        pitch: f64,
    },

    #[error("ring radius {radius} m exceeds half the scene extent ({half_extent} m)")]
    RingOutsideScene { radius: f64, half_extent: f64 },

    #[error("no receiver positions available at ring radius {radius} m")]
    EmptyRing { radius: f64 },

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { name, value, reason }
    }
}
