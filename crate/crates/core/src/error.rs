use thiserror::Error;

/// Errors raised by the search model, integrators and analytic evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// `1 + g (f_alpha - f_beta) <= 0`, so the critical coupling is not positive.
    #[error("non-physical regime: 1 + g(f_alpha - f_beta) = {value:e} at x = {x}")]
    NonPhysical { x: f64, value: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("quadrature did not converge: value {value}, estimated error {error:e}")]
    NonConvergence { value: f64, error: f64 },

    #[error("no peak above 1 - epsilon = {threshold}: maximum success probability {max}")]
    NoPeak { max: f64, threshold: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
