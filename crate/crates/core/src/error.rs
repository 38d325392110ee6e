use thiserror::Error;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// The rotation axis (r = 0) was reached where the ODE right-hand
    /// side is singular.
    #[error("axis singularity: r = {r} is not positive")]
    AxisSingularity { r: f64 },

    /// A Poincare-model point left the open unit disk.
    #[error("point outside the Poincare disk: |u|^2 = {norm_sq}")]
    OutsideDisk { norm_sq: f64 },

    /// Hyperboloid coordinates would overflow (sinh/cosh of a huge radius).
    #[error("hyperboloid coordinate overflow: r = {r} exceeds the supported radius {max}")]
    HyperboloidOverflow { r: f64, max: f64 },

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-side contract was violated (wrong event kind, non-graph
    /// window, bump touching the patch boundary, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The adaptive integrator could not make progress away from any event.
    #[error("step size underflow at t = {t}; last state {state:?}")]
    StepUnderflow { t: f64, state: Vec<f64> },

    /// Generic integration diagnostic (blow-up, step budget exhausted).
    #[error("integration failure: {0}")]
    Integration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed profile data: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
