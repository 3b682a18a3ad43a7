use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square with even dimension, got {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },

    #[error("matrix is not symplectic (|S^T J S - J|_max = {defect:e})")]
    NotSymplectic { defect: f64 },

    #[error("matrix is not symmetric (|M - M^T|_max = {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("operation requires one degree of freedom, got n = {0}")]
    RequiresPlanar(usize),

    #[error("singular Cayley chirp: |det(S - I)| = {det:e}; factor S with split_for_singular first")]
    SingularCayley { det: f64 },

    #[error("no rotation split found on the angle grid (best min |det| = {best:e})")]
    SplitFailed { best: f64 },

    #[error("factors do not multiply to S (max entry gap {gap:e})")]
    FactorMismatch { gap: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("window is not normalized (|phi| = {norm})")]
    UnnormalizedWindow { norm: f64 },

    #[error("symbol is not admissible: {0}")]
    InadmissibleSymbol(String),

    #[error("unsupported symbol class for this operation: {0}")]
    UnsupportedSymbol(&'static str),

    #[error("probe state too small for calibration (|probe| = {norm:e})")]
    ProbeTooSmall { norm: f64 },

    #[error("calibration failed: {0}")]
    CalibrationFailed(String),

    #[error("invalid evolution plan: {0}")]
    InvalidPlan(String),

    #[error("empty snapshot history")]
    EmptyHistory,

    #[error("malformed dump at line {line}: {reason}")]
    MalformedDump { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
