use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("lattice mismatch: n_x * n_p = {lattice_cells} but the grid has {grid_points} points")]
    LatticeMismatch {
        lattice_cells: usize,
        grid_points: usize,
    },

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("potential is singular at x = {x}")]
    Singularity { x: f64 },

    #[error("potential is singular at grid point {index} (x = {x})")]
    SingularGridPoint { index: usize, x: f64 },

    #[error(
        "requested {requested} levels but the potential supports only {available} bound states"
    )]
    TooManyLevels { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("overlap matrix is ill-conditioned (condition estimate {estimate:e})")]
    IllConditioned { estimate: f64 },

    #[error("pruning at e_cut = {e_cut} keeps no basis functions")]
    EmptyBasis { e_cut: f64 },

    #[error("all overlap eigenmodes fall below the threshold {threshold:e}")]
    EmptySubspace { threshold: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }
}
