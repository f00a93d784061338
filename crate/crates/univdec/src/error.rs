use thiserror::Error;

/// Errors surfaced by model construction and enumeration-based computations.
#[derive(Debug, Error)]
pub enum UnivdecError {
    #[error("sequence length {got} does not match blocklength {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("enumeration of {needed} sequences exceeds cap {cap}")]
    EnumerationCapExceeded { needed: u128, cap: u64 },

    #[error("prior has empty support")]
    EmptySupport,

    #[error("distribution does not sum to 1 (field `{field}`, sum {sum})")]
    NotADistribution { field: String, sum: String },

    #[error("negative mass in field `{field}`")]
    NegativeMass { field: String },

    #[error("metric family is empty")]
    EmptyFamily,

    #[error("state cap exceeded: {states} states requested")]
    StateCapExceeded { states: u128 },

    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("cannot parse `{value}` as an exact probability")]
    NumberParse { value: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, UnivdecError>;
