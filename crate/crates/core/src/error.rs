use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tree order k must be at least 2, got {0}")]
    InvalidOrder(u32),

    #[error("tau must exceed 2, got {0}")]
    InvalidTau(f64),

    #[error("initial condition violated: y0 + x1 = {sum} must be strictly below tau = {tau}")]
    InitialConditionViolated { sum: f64, tau: f64 },

    #[error("initial data must be strictly positive, got y0 = {y0}, x1 = {x1}")]
    NonpositiveInitial { y0: f64, x1: f64 },

    #[error("operation requires a constant external field")]
    NotConstantField,

    #[error("invariant-set hypothesis 2 < tau <= 1 + k^(k/(k-1))/(k-1) is not satisfied")]
    ConditionNotSatisfied,

    #[error("invalid field specification: {0}")]
    InvalidFieldSpec(String),

    #[error("value overflowed the representable range: {0}")]
    Overflow(String),

    #[error("truncated denominator underflowed below 1e-300")]
    DenominatorUnderflow,

    #[error("spin {0} is outside the evaluable range for this law/field")]
    SpinOutOfRange(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 invalid input, 3 assertion
    /// mismatch (not represented here), 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}
