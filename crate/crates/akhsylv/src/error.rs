use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug)]
pub enum Error {
    /// The domain shape does not support the requested operation
    /// (e.g. a gap saddle point on anything but two intervals).
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// A quadrature or iteration failed to reach the requested accuracy.
    #[error("accuracy not reached: requested {requested:e}, achieved {achieved:e} ({context})")]
    Accuracy {
        requested: f64,
        achieved: f64,
        context: String,
    },

    /// Contour or evaluation-point geometry is invalid (circles hitting the
    /// other interval, 0 on the cut, evaluation inside a guard band, ...).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// 0 lies in a spectral interval where 1/x must be expanded.
    #[error("singular domain: {0}")]
    SingularDomain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A computed quantity lost a structural property (b_k > 0, ...).
    #[error("ill-conditioned computation: {0}")]
    IllConditioned(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("singular operator: {0}")]
    SingularOperator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
