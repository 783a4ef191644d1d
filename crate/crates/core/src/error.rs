use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {n} is outside the computed range 0..={n_max}")]
    RowOutOfRange { n: usize, n_max: usize },

    #[error("brute-force enumeration supports 1 <= n <= {max}, got {n}")]
    EnumerationRange { n: usize, max: usize },

    #[error("{what} requires n >= {min}, got {n}")]
    Domain { what: &'static str, n: f64, min: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("saddle solver did not converge for n = {n}, c = {c} after {iterations} iterations")]
    SaddleNonConvergence { n: f64, c: u32, iterations: usize },

    #[error("contour quadrature did not converge for n = {n} after {doublings} doublings")]
    QuadratureNonConvergence { n: usize, doublings: u32 },

    #[error("nodes must be pairwise distinct")]
    CoincidentNodes,

    #[error("zero polynomial has no Sturm sequence")]
    ZeroPolynomial,

    #[error("moment routes disagree for n = {n}, kind {kind}: {detail}")]
    InconsistentMoments { n: usize, kind: String, detail: String },

    #[error("real-rootedness certification failed for n = {n}, kind {kind}: {detail}")]
    CertificationFailed { n: usize, kind: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
