use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("local dimensions {dims:?} do not multiply to matrix dimension {dim}")]
    BadLocalDims { dims: Vec<usize>, dim: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("spectra have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("spectrum is not in ascending order at index {index}")]
    NotAscending { index: usize },

    #[error("capacity of the reference state is zero; the ratio is undefined")]
    ZeroCapacity,

    #[error(
        "X-state coherence {pair} is complex; the Bloch expansion needs real anti-diagonal entries"
    )]
    ComplexCoherence { pair: &'static str },

    #[error("X-state coherence {pair} violates positivity: |rho_ij|^2 = {modulus_sq:e} > rho_ii*rho_jj = {bound:e}")]
    XStateNotPositive {
        pair: &'static str,
        modulus_sq: f64,
        bound: f64,
    },

    #[error("invalid X-state diagonal: {0}")]
    XStateDiagonal(String),

    #[error("Pauli string has {found} factors, Hamiltonian has {expected} sites")]
    PauliLength { expected: usize, found: usize },

    #[error("measurement outcome {label} was skipped (zero probability)")]
    OutcomeSkipped { label: usize },

    #[error("measurement outcome {label} does not exist")]
    UnknownOutcome { label: usize },

    #[error("measurement ensemble has no retained outcome")]
    NoRetainedOutcome,

    #[error("invalid sweep configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}
