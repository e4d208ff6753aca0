use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinates must be finite")]
    NonFinite,

    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("vertex list is empty")]
    NoVertices,

    #[error("body is not full-dimensional")]
    NotFullDimensional,

    #[error("vertex set is not symmetric about the origin")]
    NotSymmetric,

    #[error("vector has near-zero norm, cannot normalize")]
    ZeroVector,

    #[error("direction is not unit length (norm {0})")]
    NotUnit(f64),

    #[error("simplex iteration cap of {0} pivots exceeded")]
    LpIterationLimit(u64),

    #[error("{context}: expected an optimal LP solution, got {status}")]
    LpNotOptimal {
        context: &'static str,
        status: &'static str,
    },

    #[error("LP solution residual {0} exceeds feasibility tolerance")]
    LpResidual(f64),

    #[error("input points do not span the space")]
    RankDeficient,

    #[error("ellipsoid iteration cap of {0} exceeded")]
    MveeIterationLimit(u64),

    #[error("shape matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("John normalization failed: certified inner radius {inner} below {threshold}")]
    NormalizationFailed { inner: f64, threshold: f64 },

    #[error("John certificate too weak: inner radius {0} below 1 - 1e-4")]
    WeakJohnCertificate(f64),

    #[error("invalid domain: require 1 <= h <= r, got r = {r}, h = {h}")]
    Lemma4Domain { r: f64, h: f64 },

    #[error("perfect-square identity residual {residual} exceeds tolerance at r = {r}, h = {h}")]
    IdentityCheckFailed { r: f64, h: f64, residual: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("plank width must be nonnegative, got {0}")]
    NegativeWidth(f64),

    #[error("plank list is empty")]
    NoPlanks,

    #[error("no sample points landed inside the body")]
    NoInteriorSamples,

    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),

    #[error("invalid field {field}: {message}")]
    InvalidField { field: &'static str, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
