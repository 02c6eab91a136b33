use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: ({0}, {1}) vs ({2}, {3})")]
    GridMismatch(usize, usize, usize, usize),

    #[error("{0}")]
    Parameter(String),

    #[error("evaluation at a pole: z = {0}")]
    Pole(num_complex::Complex64),

    #[error("zero {zero} has modulus {modulus:.4} > {limit}; a band of about {required_band} coefficients would be needed")]
    Precision {
        zero: num_complex::Complex64,
        modulus: f64,
        limit: f64,
        required_band: usize,
    },

    #[error("band {band} is too small for the requested tail tolerance; about {required_band} needed")]
    BandTooSmall { band: usize, required_band: usize },

    #[error("symbol is not unimodular (residual {0:.3e})")]
    NotUnimodular(f64),

    #[error("symbol is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("not constructible: {0}")]
    NotConstructible(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
