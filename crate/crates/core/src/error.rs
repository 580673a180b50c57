use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{k} exceeds the supported bound of {bound} elements")]
    DegreeTooLarge { p: u64, k: u32, bound: u64 },
    #[error("{q} is not a positive power of the characteristic {p}")]
    NotPPower { q: u64, p: u64 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("series precision too low: need exponent {needed} but only known below {available} ({context})")]
    PrecisionTooLow {
        needed: i64,
        available: i64,
        context: String,
    },
    #[error("degenerate curve parameters: {0}")]
    DegenerateParams(String),
    #[error("smoothness check failed: {0}")]
    SmoothnessCheckFailed(String),
    #[error("fiber value z = 0 is excluded")]
    ZeroFiberValue,
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("index r = {r} outside the admissible range 0..={max}")]
    RankOutOfRange { r: i64, max: i64 },
    #[error("h0 changed from {base} to {enlarged} after enlarging pole bounds ({bundle})")]
    BoundInstability {
        base: usize,
        enlarged: usize,
        bundle: String,
    },
    #[error("not a global section: {0}")]
    NotAGlobalSection(String),
    #[error("gate failure: {0}")]
    GateFailure(String),
    #[error("inadmissible point: {0}")]
    InadmissiblePoint(String),
    #[error("classes live on different surfaces")]
    MixedSurfaces,
    #[error("transition inverse has a non-monomial entry at ({row}, {col})")]
    NonMonomialInverse { row: usize, col: usize },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
