use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,

    #[error("gcd {gcd} is not coprime with modulus {modulus}")]
    NotCoprime { gcd: BigInt, modulus: BigInt },

    #[error("matrix is singular modulo {modulus} (no unit pivot in column {column})")]
    Singular { modulus: BigInt, column: usize },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: &'static str, reason: String },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below tolerance -{tolerance:e}")]
    NotPsd { eigenvalue: f64, tolerance: f64 },

    #[error("{what}: no output after {cap} iterations")]
    IterationCap { what: &'static str, cap: u32 },

    #[error("hint vector is not in the configured hint set ({0})")]
    HintSet(String),

    #[error("enumeration refused: {0}")]
    TooLarge(String),

    #[error("stage {stage}: {message}")]
    Chain { stage: usize, message: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no solution to G^T x = v (mod {modulus}): target is not in the switching lattice")]
    Inconsistent { modulus: BigInt },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            field,
            reason: reason.into(),
        }
    }
}
