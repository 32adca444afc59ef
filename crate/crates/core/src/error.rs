use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("ring of {n} sites exceeds the configured cap of {cap} sites")]
    DimensionOverflow { n: usize, cap: usize },

    #[error("site {site} out of range 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("pair sites must differ, got ({0}, {0})")]
    SiteCollision(usize),

    #[error("matrix is not Hermitian: max |A - A^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("symmetry {name} violated: normalized commutator norm {norm:e}")]
    SymmetryViolated { name: &'static str, norm: f64 },

    #[error("temperature must be >= 0, got {0}")]
    NegativeTemperature(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed density matrix: {0}")]
    MalformedState(String),

    #[error("invalid measurement frame: {0}")]
    InvalidFrame(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
