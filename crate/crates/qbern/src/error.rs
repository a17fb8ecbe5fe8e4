use thiserror::Error;

/// Errors surfaced by the exact and p-adic computation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// The q -> 1 limit does not exist (denominator vanishes at q = 1
    /// while the numerator does not).
    #[error("pole at q = 1")]
    PoleAtOne,

    /// A certified p-adic result could not be produced at the working
    /// precision (e.g. a denominator indistinguishable from zero).
    #[error("insufficient certified precision: {0}")]
    PrecisionLoss(String),

    /// q^t requires t in Z_p; the exponent's denominator is divisible by p.
    #[error("exponent {0} is not a p-adic integer for p = {1}")]
    NotPAdicInteger(String, u64),

    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(i64, u64),

    /// The umbral linear equation for entry n has a vanishing coefficient,
    /// so the entry is not determined by the recurrence.
    #[error("degenerate umbral equation at n = {0}")]
    DegenerateEquation(u32),

    /// Coefficients left the range of the fixed-width exact kernel.
    /// The requested case is too large for the fast integer path.
    #[error("exact kernel coefficient overflow: {0}")]
    KernelOverflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
