use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("symbol is not finite at nonzero mode {index:?}")]
    NonFiniteSymbol { index: Vec<usize> },

    #[error("symbol is singular at the zero mode and no zero-mode rule was declared")]
    UndeclaredZeroMode,

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("grid under-resolved: wave packet reaches the box boundary at t = {first_unsafe_time}")]
    UnderResolved { first_unsafe_time: f64 },

    #[error("numerical abort at t = {time}: {reason}")]
    NumericalAbort {
        time: f64,
        reason: String,
        snapshot: Option<std::path::PathBuf>,
    },

    #[error("time step {dt} violates the stability limit {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
