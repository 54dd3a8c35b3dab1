use thiserror::Error;

/// Errors from state construction and linear-algebra operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("subsystem dims {dims:?} do not multiply to vector length {len}")]
    BadShape { dims: Vec<usize>, len: usize },

    #[error("subsystem dimension {0} is smaller than 2")]
    SubsystemTooSmall(usize),

    #[error("subsystem index {0} out of range for {1} subsystems")]
    BadSubsystem(usize, usize),

    #[error("kept subsystem set is empty or not strictly increasing")]
    BadKeepSet,

    #[error("state is not normalized: |norm^2 - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian: max |A - A^dagger| = {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite: min eigenvalue {0:.3e}")]
    NotPsd(f64),

    #[error("trace is {0:.12}, expected 1")]
    BadTrace(f64),

    #[error("bit string length {got}, expected {want}")]
    BitLength { got: usize, want: usize },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("state is not a register of qubits (dims {0:?})")]
    NotQubits(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, Error>;
