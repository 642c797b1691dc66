use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 2, got {0}")]
    InvalidDegree(u32),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("ring of order {0} exceeds the supported size")]
    RingTooLarge(u64),
    #[error("invalid ring specifier `{0}`")]
    BadSpec(String),
    #[error("element representative {rep} is not in {ring}")]
    ElementOutOfRange { rep: u64, ring: String },
    #[error("operands belong to different rings ({0} vs {1})")]
    MixedRings(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("-1 has no square root in {0}")]
    NoSqrtMinusOne(String),
    #[error("points must be distinct")]
    IdenticalPoints,
    #[error("duplicate point ({0}, {1}) in point set")]
    DuplicatePoint(u32, u32),
    #[error("points are not at integral distance")]
    NotIntegral,
    #[error("{what}: {value} exceeds the bound {limit}")]
    BoundExceeded { what: &'static str, value: u64, limit: u64 },
    #[error("invalid affine map: {0}")]
    InvalidMap(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
