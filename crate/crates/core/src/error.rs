use thiserror::Error;

/// Errors raised by grid construction, field operations and the run harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field has {found} samples but the grid holds {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a {0} grid")]
    UnsupportedGrid(&'static str),

    #[error("dyadic scale {0} is outside the resolvable band")]
    ScaleOutOfBand(f64),

    #[error("non-finite field values")]
    NonFinite,

    #[error("the closed-form ground state is six-dimensional, grid has d = {0}")]
    NotSixDimensional(usize),

    #[error("energy {energy} is not below the ground-state energy {threshold}")]
    AboveThreshold { energy: f64, threshold: f64 },

    #[error("mass-resonance required: kappa = {0}, the identity needs kappa = 1/2")]
    MassResonanceRequired(f64),

    #[error("boost {0:?} is not on the frequency lattice")]
    OffLattice(Vec<f64>),

    #[error("window [{0}, {1}] is outside the recorded series")]
    WindowOutOfRange(f64, f64),

    #[error("singular tridiagonal system at row {0}")]
    Singular(usize),

    #[error("config: {0}")]
    Config(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
