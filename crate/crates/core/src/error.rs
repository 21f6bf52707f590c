use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation received a value outside its domain.
    /// `name` is the parameter name (`width`, `area`, ...).
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The integrated state lost normalization beyond the allowed threshold,
    /// which means the time step is too coarse for the drive.
    #[error("norm drift {drift:e} exceeds threshold {threshold:e} (time step too coarse)")]
    NormDrift { drift: f64, threshold: f64 },

    #[error("initial state is not a computational basis state")]
    NotBasisState,

    #[error("run for pulse width {width:e} s failed: {source}")]
    SweepRow {
        width: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Strips sweep wrappers and returns the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::SweepRow { source, .. } => source.root(),
            other => other,
        }
    }
}
