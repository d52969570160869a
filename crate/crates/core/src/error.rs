use thiserror::Error;

/// Errors raised by the geometric, arithmetic and numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// |trace| ≤ 2: the element is parabolic, elliptic or central.
    #[error("|trace| = {abs_trace} is not hyperbolic (needs > 2)")]
    NotHyperbolic { abs_trace: f64 },

    #[error("{what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A divisibility or identity that holds by theory failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    /// The short spectrum would be incomplete at this radius.
    #[error("level {level}, pinch {pinch:e}: geodesic floor {floor:.6} does not exceed radius {radius}")]
    Validity {
        level: u64,
        pinch: f64,
        radius: f64,
        floor: f64,
    },

    #[error("numerics: {0}")]
    Numerics(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
