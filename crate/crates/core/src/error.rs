use thiserror::Error;

/// Errors produced by the series, approximant and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The nonlinearity cannot supply a derivative of the requested order.
    #[error("nonlinearity `{name}` supports derivatives up to order {supported}, order {requested} requested")]
    Capability {
        name: String,
        requested: usize,
        supported: usize,
    },

    #[error("index {index} out of range for a series with {len} components")]
    Index { index: usize, len: usize },

    /// Only the (method, beta) pairs printed in the literature are available.
    #[error("no tabulated {method} approximant for beta = {beta}")]
    NotTabulated { method: String, beta: f64 },

    #[error("integration failed at t = {t}, x = {x}, v = {v}: {reason}")]
    IntegrationFailure { t: f64, x: f64, v: f64, reason: String },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudget { max_steps: usize, t: f64 },

    #[error("found {found} upward zero crossings, at least 2 are needed; extend t_end")]
    InsufficientHorizon { found: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("t = {t} lies outside the trajectory horizon [0, {t_end}]")]
    Range { t: f64, t_end: f64 },
}

impl Error {
    /// True for failures of the numerical oracle (as opposed to bad input).
    pub fn is_oracle_failure(&self) -> bool {
        matches!(
            self,
            Error::IntegrationFailure { .. } | Error::StepBudget { .. } | Error::InsufficientHorizon { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
