use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid matrix ({a} {b}; {c} {d}): {reason}")]
    InvalidMatrix {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        reason: &'static str,
    },

    #[error("modulus {c} is not a multiple of the level {level}")]
    LevelMismatch { c: u64, level: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("({t}/{p}) is not 1")]
    NotResidue { t: i64, p: u64 },

    #[error("argument {value} exceeds the supported limit {limit}")]
    SizeLimit { value: u64, limit: u64 },

    #[error("imaginary part {imag} exceeds tolerance at {bits} bits")]
    Precision { imag: String, bits: u32 },

    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("quadrature did not converge: error estimate {estimate:e} > {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
