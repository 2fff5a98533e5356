use thiserror::Error;

use crate::solver::NewtonReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid run or mesh configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Geometry the enhanced-velocity construction cannot handle (non-nested traces).
    #[error("unsupported mesh: {0}")]
    UnsupportedMesh(String),

    #[error("singular coefficient on face {face}: {detail}")]
    SingularCoefficient { face: usize, detail: String },

    #[error("non-finite entry while assembling element {element}: {detail}")]
    Assembly { element: usize, detail: String },

    /// A flux block of the slab Jacobian could not be inverted.
    #[error("cannot eliminate fluxes of face {face}: {detail}")]
    Elimination { face: usize, detail: String },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("Newton did not converge on slab {slab} after {} iterations (last residual {:.3e})",
        report.iterations, report.history.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { slab: usize, report: NewtonReport },

    #[error("{path}:{line}: {detail}")]
    Ingestion {
        path: String,
        line: usize,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
