use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cell ({i}, {j}) is out of bounds for a {nx}x{ny} grid")]
    OutOfBounds { i: i64, j: i64, nx: usize, ny: usize },

    #[error("{method} did not converge within {limit} iterations")]
    NotConverged { method: &'static str, limit: usize },

    #[error("heap: {0}")]
    Heap(#[from] crate::fmm::HeapError),

    #[error("descent stalled after {steps} steps at ({x}, {y})")]
    DescentStalled { steps: usize, x: f64, y: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
