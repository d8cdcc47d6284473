use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level {level} exceeds the configured level cap {cap}")]
    Capacity { level: usize, cap: usize },

    #[error("level {level} has not been built (complex holds levels 0..={built})")]
    MissingLevel { level: usize, built: usize },

    #[error("level 0 has degenerate boundary sets; graphs start at level 1")]
    DegenerateLevel,

    #[error("invalid cell word letter {0} (letters are 0..=5)")]
    InvalidWord(u8),

    #[error("map is not simplicial: image of {dim} {index} at level {level} is not a simplex")]
    NotSimplicial { level: usize, dim: &'static str, index: usize },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown boundary set `{0}`")]
    UnknownBoundary(String),

    #[error("boundary sets overlap at vertex {0}")]
    BoundaryOverlap(usize),

    #[error("boundary set is empty")]
    EmptyBoundary,

    #[error("A and B are disconnected")]
    Disconnected,

    #[error("not a flow: {} vertices off the boundary carry divergence (worst {worst_vertex}: {worst_value:e})", .count)]
    NotAFlow { count: usize, worst_vertex: usize, worst_value: f64 },

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("dense oracle limited to {cap} vertices, graph has {vertices}")]
    OracleTooLarge { vertices: usize, cap: usize },

    #[error("dense factorization failed: grounded Laplacian is not positive definite")]
    Factorization,

    #[error("structure check failed: {0}")]
    Structure(String),

    #[error("seam mismatch at vertex {vertex}: divergence {divergence:e}")]
    SeamMismatch { vertex: usize, divergence: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
