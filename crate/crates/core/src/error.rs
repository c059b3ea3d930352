use thiserror::Error;

use crate::rational::Convergent;

/// Errors produced by the toolkit.
///
/// Variants fall into two families: input problems (domain, parse, size,
/// schedule consistency) and numerical limits (precision, budget,
/// bracket). The CLI maps the first family to exit code 2 and the second
/// to exit code 3, see [`Error::is_numerical`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("could not parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("set size {size} exceeds cap {cap}")]
    Size { size: u128, cap: u128 },

    #[error("schedule inconsistent: {0}")]
    ScheduleInconsistent(String),

    #[error("no convergent with denominator in a feasible range below {cap}")]
    CapExceeded { cap: u128 },

    #[error("decimal precision exhausted; last certified convergent {last:?}")]
    PrecisionExhausted { last: Option<Convergent> },

    #[error("precision insufficient for certification; {required_bits} bits required")]
    Precision { required_bits: u32 },

    #[error("budget exhausted: best estimate {estimate}, achieved error {achieved}")]
    Budget { estimate: f64, achieved: f64 },

    #[error("operation count {ops} exceeds cap {cap}")]
    OperationCap { ops: u128, cap: u128 },

    #[error("no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by numerical limits rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. }
                | Error::Precision { .. }
                | Error::Budget { .. }
                | Error::OperationCap { .. }
                | Error::Bracket { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
