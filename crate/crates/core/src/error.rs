use thiserror::Error;

/// Errors surfaced by the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("matrix size mismatch: {0}")]
    SizeMismatch(String),

    #[error("eigendecomposition failed: {0}")]
    Eigensolver(String),

    #[error("operator is not unitary: max |U^H U - 1| = {residual:.3e}")]
    NonUnitary { residual: f64 },

    #[error("rank-deficient orbital matrix (|R_{index},{index}| = {pivot:.3e})")]
    RankDeficient { index: usize, pivot: f64 },

    #[error("imaginary-part guard tripped at period {period}: residual {residual:.3e}")]
    ImaginaryGuard { period: usize, residual: f64 },

    #[error("window size {w} out of range for L = {limit}")]
    WindowOutOfRange { w: usize, limit: usize },

    #[error("series too short: {len} samples, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("empty Floquet mode set")]
    EmptyModeSet,

    #[error("reference mode has no weight on subsystem A (norm {norm:.3e})")]
    ZeroNormRestriction { norm: f64 },

    #[error("no valid scan point: {0}")]
    NoValidScanPoint(String),

    #[error("state preparation fell back to the ground state but fallback is disallowed")]
    FallbackDisallowed,

    #[error("full entanglement spectra were not recorded")]
    MissingSpectra,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
