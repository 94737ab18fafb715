use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector dimension n = {0} is not supported here")]
    InvalidDimension(usize),
    #[error("parity {parity} does not match n = {n}")]
    ParityMismatch { n: usize, parity: &'static str },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("point lies on the kernel singularity")]
    Pole,
    #[error("zero covector")]
    ZeroCovector,
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("grid margin {have} is smaller than the stencil reach {need}")]
    MarginTooSmall { have: usize, need: usize },
    #[error("grid needs {need_mb} MiB, above the {cap_mb} MiB cap")]
    MemoryCap { need_mb: u64, cap_mb: u64 },
    #[error("compatibility condition violated: relative D1 residual {ratio:.3e} > {threshold:.3e}")]
    Incompatible { ratio: f64, threshold: f64 },
    #[error("kernel condition violated: relative D0* residual {ratio:.3e} > {threshold:.3e}")]
    KernelCondition { ratio: f64, threshold: f64 },
    #[error("input is not monogenic: relative D0 residual {ratio:.3e} > {threshold:.3e}")]
    NotMonogenic { ratio: f64, threshold: f64 },
    #[error("plane wave frequency is not null: |zeta.zeta| = {0:.3e}")]
    NotNull(f64),
    #[error("empty kernel: expected dimension {expected}, found {found}")]
    EmptyKernel { expected: usize, found: usize },
    #[error("unsupported quadrature level {0}")]
    InvalidLevel(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
