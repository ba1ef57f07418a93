use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid prime power: {0}")]
    InvalidPrimePower(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A formula that must produce an integer produced a proper fraction.
    #[error("{what} is not integral for q={q}, n={n}: {value}")]
    NonIntegral {
        what: &'static str,
        q: String,
        n: u32,
        value: String,
    },

    #[error("brute-force budget exceeded: {required} field multiplications required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error(
        "pole proximity: |1 - c w^{exponent}| <= {distance:e} is below the threshold {threshold:e}"
    )]
    PoleProximity {
        exponent: u64,
        distance: f64,
        threshold: f64,
    },

    #[error("argument outside the unit disk: |w| <= {0}")]
    OutsideUnitDisk(f64),

    #[error("certified error {achieved:e} exceeds the requested bound {requested:e}")]
    InsufficientPrecision { achieved: f64, requested: f64 },

    /// A quantity that must be real came out with a certified nonzero imaginary part.
    #[error("imaginary part {imag:e} exceeds certified error {bound:e} for {what}")]
    RealnessViolation { what: String, imag: f64, bound: f64 },
}

impl Error {
    /// Budget and precision refusals: the request was valid but cannot be honoured.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::PoleProximity { .. }
                | Error::OutsideUnitDisk(_)
                | Error::InsufficientPrecision { .. }
        )
    }

    /// Violations of mathematical invariants, which indicate a bug.
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            Error::NonIntegral { .. } | Error::RealnessViolation { .. }
        )
    }
}
