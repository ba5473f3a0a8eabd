use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {index} of the channel sums to {sum}, expected 1")]
    NonStochasticRow { index: usize, sum: f64 },

    #[error("negative probability {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("sequence length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("no word of the requested type lies at distance {d} (n = {n})")]
    InfeasibleDistance { d: usize, n: usize },

    #[error("type {0:?} is not realisable at this blocklength")]
    NonIntegralType(Vec<f64>),

    #[error("linear feasibility solver failed: {0}")]
    NumericFailure(String),

    #[error("message {index} out of range for a codebook of {messages} messages")]
    MessageOutOfRange { index: usize, messages: usize },

    #[error("codebook expurgation left {survivors} codeword(s)")]
    Exhausted { survivors: usize },

    #[error("strategy requires side information that was not granted: {0}")]
    MissingSideInfo(&'static str),

    #[error("exact evaluation needs ~{required:.3e} operations, budget is {budget:.3e}")]
    BudgetExceeded { required: f64, budget: f64 },

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("rate {rate} is not below the capacity {capacity}")]
    RateTooHigh { rate: f64, capacity: f64 },

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
