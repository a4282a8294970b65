use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for {total} photons")]
    IndexOutOfRange { index: usize, total: usize },

    #[error("reflectivity {0} outside [0, 1]")]
    Reflectivity(f64),

    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalised (squared norm {0})")]
    NotNormalised(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("ambiguous zero-energy subspace: {0} eigenvalues below tolerance")]
    AmbiguousZeroMode(usize),

    #[error("profile is not exponentially localised")]
    NotExponentiallyLocalised,

    #[error("herald target {target} exceeds source truncation n_max = {n_max}")]
    HeraldBeyondTruncation { target: usize, n_max: usize },

    #[error("eigen-solver failed to converge")]
    NoConvergence,
}
