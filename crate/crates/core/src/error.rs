use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "eavesdropper rates {first} (index {i}) and {second} (index {j}) are not distinct \
         (relative separation {separation:.3e} < 1e-6); use distinct eavesdropper SNRs \
         or build the scenario with `Scenario::with_jittered_rates`"
    )]
    RateSeparation {
        i: usize,
        j: usize,
        first: f64,
        second: f64,
        separation: f64,
    },

    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("exponential integral has a pole at x = 0")]
    Pole,

    #[error("incomplete gamma Γ[{order}, {x}] diverges")]
    DivergentGamma { order: i32, x: f64 },

    #[error("multinomial parts sum to {parts_sum}, expected {n}")]
    PartsMismatch { n: u32, parts_sum: u32 },

    #[error("exact integer arithmetic overflows for n = {n} (limit {limit})")]
    IntegerOverflow { n: u32, limit: u32 },

    #[error("pole locations {first} and {second} coincide")]
    CoincidentPoles { first: f64, second: f64 },

    #[error("no closed form for {0}; use the quadrature evaluator")]
    UnsupportedClosedForm(&'static str),

    #[error(
        "quadrature did not converge: estimate {estimate:.6e}, error estimate {error:.3e}, \
         {intervals} intervals"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("invalid regime: {0}")]
    InvalidRegime(&'static str),

    #[error("Monte Carlo configuration rejected: {0}")]
    McConfig(String),
}
