use thiserror::Error;

/// Errors raised by the library. Trace failures that stem from the code not
/// meeting an algorithm's conditions are *not* errors; they are reported as
/// [`crate::trace::TraceStatus::ConditionsViolated`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("symbol {symbol} at position {position}, codeword {codeword} is not below q = {q}")]
    SymbolOutOfRange {
        position: usize,
        codeword: usize,
        symbol: u64,
        q: usize,
    },

    #[error("codewords {0} and {1} are identical")]
    DuplicateColumns(usize, usize),

    #[error("invalid code dimensions: {0}")]
    InvalidDimensions(String),

    #[error("codeword index {index} outside 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value {0} is outside [0, 1]")]
    OutOfUnitInterval(String),

    #[error("invalid rational {num}/{den}")]
    InvalidRational { num: String, den: String },

    #[error("traced set has {traced} codewords but only {t0} colluders")]
    TracedTooLarge { traced: usize, t0: usize },

    #[error("residual entry {position} = {value} is outside [0, 1]; traced set is not a subset of the colluders")]
    ResidualOutOfRange { position: usize, value: String },

    #[error("operation requires a binary code, got q = {0}")]
    NonBinary(usize),

    #[error("inner code has {inner_m} codewords but outer alphabet has {outer_q} symbols")]
    AlphabetMismatch { inner_m: usize, outer_q: usize },

    #[error("subset budget of {0} evaluations exceeded")]
    BudgetExceeded(u64),

    #[error("parent-set enumeration over {suspects} suspects exceeds cap of {cap} candidates")]
    EnumerationCap { suspects: usize, cap: u64 },

    #[error("no rational a/t with t <= {t_max} within {tol} of {value}")]
    NoRationalCandidate { value: f64, t_max: u64, tol: f64 },

    #[error("{value} is within {tol} of both {first} and {second}")]
    AmbiguousRational {
        value: f64,
        tol: f64,
        first: String,
        second: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
