use thiserror::Error;

pub type Result<T> = std::result::Result<T, GtmError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GtmError {
    #[error("base k must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("modulus L must be at least 2, got {0}")]
    InvalidModulus(u32),

    #[error("digit coefficient {digit} is outside [1, {max}]")]
    DigitOutOfRange { digit: u32, max: u32 },

    #[error("invalid kappa table: {0}")]
    InvalidSpec(String),

    #[error("exponent {exponent} lies outside the finite kappa window of {window} columns")]
    WindowExceeded { exponent: usize, window: usize },

    #[error("operation needs an eventually periodic kappa; finite-window specs are refused")]
    FiniteWindowSpec,

    #[error("{what} needs {requested} terms, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        budget: u64,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("sequence is ultimately periodic; stammering witnesses exist only for non-periodic sequences")]
    PeriodicSpec,

    #[error("construction index m = {m} is too small, need m >= {min}")]
    MTooSmall { m: u32, min: u32 },

    #[error("word of length {len} is too short, need at least {needed}")]
    InsufficientLength { len: usize, needed: usize },

    #[error("beta = {beta} is smaller than the modulus L = {modulus}")]
    BetaTooSmall { beta: u64, modulus: u32 },

    #[error("invalid value map: {0}")]
    InvalidValueMap(String),

    #[error("need at least {needed} convergents, got {got}")]
    InsufficientDepth { needed: usize, got: usize },

    #[error("two roots of unity collided at coefficient {index}")]
    CoefficientCollision { index: usize },

    #[error("spec file {line}:{column}: {message}")]
    SpecParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
