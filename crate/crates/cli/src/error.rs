use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Core(#[from] avcauth::Error),
}

impl CliError {
    /// 2 for bad input, 3 for solver trouble, 4 when exact evaluation does
    /// not fit the budget.
    pub fn exit_code(&self) -> i32 {
        use avcauth::Error as E;
        match self {
            Self::Parse(_) | Self::Io(_) | Self::InvalidParams(_) => 2,
            Self::Core(E::NumericFailure(_)) => 3,
            Self::Core(E::BudgetExceeded { .. }) => 4,
            Self::Core(_) => 2,
        }
    }
}
