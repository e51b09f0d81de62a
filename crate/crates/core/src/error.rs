use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No truncation index below the hard cap satisfies the tail bound.
    #[error("no truncation point N <= {cap} reaches tail bound {eps} at radius {r}")]
    TruncationUnattainable { r: f64, eps: f64, cap: u64 },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// |f| fell below its evaluation bound on a contour sample after the
    /// maximum number of refinement levels; the caller should perturb the box.
    #[error("contour boundary too close to a zero near parameter t={t}")]
    BoundaryNearZero { t: f64 },

    #[error("operation requires a complete zero set (certificate missing)")]
    IncompleteZeroSet,

    #[error("sequence family mismatch: {0}")]
    FamilyMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
