use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonolieError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("singular argument: {0}")]
    Singular(&'static str),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("parity violation: m = {m}, k = {k}")]
    Parity { m: u32, k: u32 },

    #[error("kernel singular at quadrature node {node}: point too close to the kappa boundary")]
    KernelSingular { node: usize },

    #[error("series does not decay (tail ratio {ratio:.3e})")]
    Divergence { ratio: f64 },

    #[error("word length {len} exceeds cap {cap}")]
    WordTooLong { len: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, MonolieError>;
