use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("eigen-solver did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("dimension {dim} exceeds the dense limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("matrix has {expected} entries expected, {found} supplied")]
    EntryCount { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidState(&'static str),

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("invalid amplitudes: {0}")]
    InvalidAmplitudes(&'static str),

    #[error("trace-distance increase {increase:e} at t = {time} exceeds the inaccessible-information bound {bound:e}")]
    BoundViolation { time: f64, increase: f64, bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
