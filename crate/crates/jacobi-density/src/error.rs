//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-supplied data; `path` points at the offending field.
    #[error("invalid configuration at `{path}`: {message}")]
    Config { path: String, message: String },

    /// Requested matrix dimension does not fit the platform index range.
    #[error("matrix dimension {n} blocks x {t} overflows the index range")]
    DimensionOverflow { n: usize, t: usize },

    /// The discriminant does not have the expected degree.
    #[error("discriminant has degree {found}, expected {expected}")]
    BadDiscriminantDegree { expected: usize, found: usize },

    /// Band-edge search could not locate 2t real solutions of S(x) = +-2.
    #[error("band edge search found {found} real roots of S(x)^2 = 4, expected {expected}")]
    BandEdges { found: usize, expected: usize },

    /// A quadrature failed to reach its tolerance within the refinement cap.
    #[error("quadrature did not converge{}: estimate {estimate:e}, error {error:e}",
        at.map(|z| format!(" at z = {z}")).unwrap_or_default())]
    NonconvergedQuadrature {
        at: Option<f64>,
        estimate: f64,
        error: f64,
    },

    /// Tabulated g(omega) carries no phi; finite matrices cannot be built from it.
    #[error("tabulated scaling does not determine phi(n); empirical runs need constant or power scaling")]
    UnsupportedForEmpirical,

    /// Closed-form linear-scaling density is degenerate at a = b (r = 0).
    #[error("closed form is degenerate for a = b (r = 0); use the quadrature path")]
    DegenerateClosedForm,

    #[error("z = 0 must be handled through rho_at_zero")]
    ZeroNotSupported,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
