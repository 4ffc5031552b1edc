use thiserror::Error;

/// Errors raised while building states, observables or evaluating criteria.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not Hermitian: max |M - M^dag| = {deviation:.3e}")]
    NonHermitian { deviation: f64 },

    #[error("not unit trace: |Tr - 1| = {deviation:.3e}")]
    NonUnitTrace { deviation: f64 },

    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("parameter {value} outside [0, 1] for family {family}")]
    ParameterOutOfRange { family: String, value: f64 },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("observable set violates {invariant}: deviation {deviation:.3e}")]
    InvalidObservableSet { invariant: &'static str, deviation: f64 },

    #[error("rotation is not orthogonal: max |R R^T - I| = {deviation:.3e}")]
    NonOrthogonalRotation { deviation: f64 },

    #[error("expectation value has imaginary part {imag:.3e}")]
    ImaginaryExpectation { imag: f64 },

    #[error("steered party's observable set is not a full LOO set ({0})")]
    PartialBobSet(String),

    #[error("gain vector has length {got}, expected {expected}")]
    GainLength { expected: usize, got: usize },

    #[error("malformed covariance blocks: kernel of local block not in kernel of C ({residual:.3e})")]
    MalformedBlocks { residual: f64 },

    #[error("unphysical Gaussian covariance matrix: {0}")]
    Unphysical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no violation found in [{lo}, {hi}]")]
    NoViolationInRange { lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
