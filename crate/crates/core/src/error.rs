use thiserror::Error;

/// Errors raised by the spectral, basis and perturbative routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A coupling map evaluated at one of its poles.
    #[error("singular coupling: {0}")]
    SingularCoupling(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("invalid root: {0}")]
    InvalidRoot(String),

    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    #[error("segment widths sum to {total} but the ring circumference is {circumference}")]
    WidthMismatch { total: f64, circumference: f64 },

    #[error("cutoff {m_max} too small, need at least {required}")]
    CutoffTooSmall { m_max: usize, required: usize },

    /// Parameters outside the ordering `c << a << L` the expansions assume.
    #[error("outside the asymptotic regime: {0}")]
    Regime(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
