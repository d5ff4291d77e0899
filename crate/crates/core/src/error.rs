use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure surfaced by the numerics.
///
/// Variants split into two families: configuration problems (the inputs
/// violate a documented precondition) and numeric failures (the computation
/// itself went wrong). [`Error::is_numeric`] tells them apart.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("x = {x} lies outside the profile domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("step-size error at step {step}: {reason}")]
    StepSize { step: usize, reason: String },

    #[error("CFL violation: dt = {dt:e} exceeds 0.9 x stability bound {bound:e}")]
    Cfl { dt: f64, bound: f64 },

    #[error("numeric failure at step {step}: {reason}")]
    Numeric { step: usize, reason: String },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("no root in bracket [{lo}, {hi}] (values {f_lo}, {f_hi})")]
    NoRoot { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("data error: {0}")]
    Data(String),

    #[error("unreliable estimate: {0}")]
    Unreliable(String),

    #[error("front left the computational window: {0}")]
    Window(String),

    #[error("no convergence after {iterations} iterations; sup-change history {history:?}")]
    NonConvergence { iterations: usize, history: Vec<f64> },

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric { .. }
                | Error::StepSize { .. }
                | Error::NoRoot { .. }
                | Error::Unreliable(_)
                | Error::NonConvergence { .. }
                | Error::Resolution(_)
                | Error::Window(_)
                | Error::Inconclusive(_)
                | Error::Data(_)
        )
    }
}
