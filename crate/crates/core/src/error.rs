//! Error type shared by every module in the crate.

/// Crate-wide error type.
///
/// Construction errors (`InvalidParameter`) are distinct from evaluation
/// errors (`Domain`) so callers can tell a misconfigured object from a bad
/// evaluation point. Solver failures carry the time at which they occurred.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor was handed a value outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation point lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    /// Bracketed root finding failed to locate or refine a root.
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),

    /// The difference-quotient limit did not stabilize, i.e. the function
    /// does not appear to be differentiable in the weighted sense at `t`.
    #[error("derivative limit did not converge at t = {t} (last change {last_change:e})")]
    LimitNoConvergence { t: f64, last_change: f64 },

    /// Product-form evaluation requires an exact derivative and none was supplied.
    #[error("product-form derivative requires an exact inner derivative")]
    MissingDerivative,

    /// Adaptive step control drove the step below the representable floor,
    /// which signals stiffness or a singularity in the right-hand side.
    #[error("step size underflow at t = {t}: step {h:e} below floor")]
    StepUnderflow { t: f64, h: f64 },

    /// The state left the representable range (overflow or NaN), which
    /// signals finite-time blow-up of the solution.
    #[error("non-finite state at t = {0}")]
    NonFiniteState(f64),

    /// A query time maps outside the range covered by a trajectory.
    #[error("query at {t} falls outside the solved range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
