use thiserror::Error;

pub type Result<T, E = HdxError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HdxError {
    #[error("no maximal faces given")]
    EmptyInput,
    #[error("maximal faces differ in size: expected {expected} vertices, found {found} in face {face}")]
    MixedDimension {
        expected: usize,
        found: usize,
        face: String,
    },
    #[error("face {0} repeats a vertex label")]
    DuplicateVertexInFace(String),
    #[error("face {0} is not in the complex")]
    FaceNotInComplex(String),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("level {level} outside the allowed range [{min}, {max}]")]
    LevelOutOfRange { level: isize, min: isize, max: isize },
    #[error("complex dimension {0} is too large for face enumeration")]
    DimensionTooLarge(usize),
    #[error("fatness constant {0} is not in (0, 1)")]
    BadFatness(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("cochain has top dimension {0}; no (i+1)-faces exist")]
    TopDimension(isize),
    #[error("distribution support does not match the graph: {0}")]
    SupportMismatch(String),
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("bound violated in {check}: {detail}")]
    BoundViolated { check: String, detail: String },
    #[error("vertex {0} has zero degree")]
    IsolatedVertex(usize),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("{what} needs {size} elements but the exact-mode cap is {cap}; use sampled mode")]
    TooLargeForExact {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("alpha {alpha} is not below the threshold {threshold}")]
    AlphaTooLarge { alpha: f64, threshold: f64 },
    #[error("dimension {0} is too small (d > 1 required)")]
    DimensionTooSmall(isize),
    #[error("need at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("no d-face survived sampling")]
    EmptyAfterPruning,
    #[error("complex is not partite regular: {0}")]
    NotPartiteRegular(String),
    #[error("constant C must be positive, got {0}")]
    NonPositiveC(f64),
    #[error("complex invariant violated: {0}")]
    InvariantViolated(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl HdxError {
    pub(crate) fn violated(check: impl Into<String>, detail: impl Into<String>) -> Self {
        HdxError::BoundViolated {
            check: check.into(),
            detail: detail.into(),
        }
    }
}
