use num_complex::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported constellation order {0} (expected 4 or 16)")]
    UnsupportedOrder(usize),
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),
    #[error("constellation pair is not disjoint: point {0} appears in both sets")]
    OverlappingPair(Complex64),
    #[error("expected {expected} bits, got {got}")]
    BitLength { expected: usize, got: usize },
    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),
    #[error("point {0} is not a member of the constellation")]
    PointNotFound(Complex64),
    #[error("index pattern {0:?} is not in the codebook")]
    PatternNotFound(Vec<usize>),
    #[error("invalid index pattern {indices:?} for n = {n}")]
    InvalidPattern { indices: Vec<usize>, n: usize },
    #[error("invalid index parameters n = {n}, k = {k}: {reason}")]
    InvalidIndexParams { n: usize, k: usize, reason: String },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown scheme id {0:?}")]
    UnknownScheme(String),
    #[error("config error at key {key:?}: {reason}")]
    Config { key: String, reason: String },
    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
