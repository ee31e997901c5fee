use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A summation or iteration stopped at its cutoff before meeting the
    /// requested accuracy. `estimate` is the best value obtained.
    #[error("{what} did not converge: achieved accuracy {achieved:e} (estimate {estimate})")]
    ConvergenceFailure {
        what: String,
        estimate: Complex64,
        achieved: f64,
    },

    #[error("singular truncated system (rho = {rho}, f = {f}, order = {order})")]
    SingularSystem { rho: f64, f: f64, order: usize },

    #[error("outside the domain of validity: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
