use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix exponential series did not converge within {0} terms")]
    NonConvergence(usize),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("missing payoff entry for ({row},{col})")]
    MissingEntry { row: String, col: String },

    #[error("line {line}: duplicate payoff entry for ({row},{col})")]
    DuplicateEntry {
        line: usize,
        row: String,
        col: String,
    },

    #[error("duplicate move label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown move label {0:?}")]
    UnknownLabel(String),

    #[error("empty move subset")]
    EmptySubset,

    #[error("index {index} out of bounds for {len} moves")]
    IndexOutOfBounds { index: usize, len: usize },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("quantization base game must be 2×2, got {rows}×{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("matrix for strategy {0:?} is not unitary")]
    NotUnitary(String),

    #[error("strategy list is empty")]
    NoStrategies,

    #[error("invalid strategy spec {0:?}")]
    InvalidStrategySpec(String),

    #[error("grid too small: {theta_steps}x{phi_steps} (each axis needs at least 2 points)")]
    GridTooSmall { theta_steps: usize, phi_steps: usize },

    #[error("strategy set mismatch: {0}")]
    StrategySetMismatch(String),

    #[error("unknown profile ({row},{col})")]
    UnknownProfile { row: String, col: String },

    #[error("trials must be at least 1")]
    NoTrials,
}
