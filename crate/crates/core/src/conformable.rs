//! The weighted (conformable) derivative in limit and product form, the IVP
//! data model, and the transform that turns a weighted IVP into a classical
//! one.
//!
//! The operator D_ψ f(t) = lim_{ε→0} [f(t + ε·ψ_α(t)) − f(t)]/ε equals
//! ψ_α(t)·f′(t) wherever f is differentiable, so it is a rescaled classical
//! derivative rather than a nonlocal operator. Substituting τ = φ_α(t) makes
//! it a plain d/dτ; [`reparametrize`] performs exactly that substitution on an
//! IVP, and [`pull_back`] maps the classical solution onto the original time
//! axis.
//!
//! # Example
//! ```
//! use reparam_core::conformable::{conf_derivative_product, ScalarFunction};
//! use reparam_core::weights::WeightSpec;
//!
//! let f = ScalarFunction::with_derivative(|t: f64| t.sin(), |t: f64| t.cos());
//! let w = WeightSpec::power_law(0.5).unwrap();
//! // psi(4) * cos(4) = 2 cos 4
//! let d = conf_derivative_product(&f, &w, 4.0).unwrap();
//! assert!((d - 2.0 * 4.0f64.cos()).abs() < 1e-14);
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics;
use crate::solvers::{Trajectory, TrajectoryMeta};
use crate::weights::{RealFn, WeightSpec};

/// Right-hand side of a first-order system: writes F(t, x) into `out`.
pub type RhsFn = Arc<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;

/// A scalar function with an optional exact derivative.
///
/// The product-form derivative requires the exact derivative; the limit form
/// needs only the evaluator.
#[derive(Clone)]
pub struct ScalarFunction {
    eval: RealFn,
    derivative: Option<RealFn>,
}

impl ScalarFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f), derivative: None }
    }

    pub fn with_derivative(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(f), derivative: Some(Arc::new(df)) }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn derivative_at(&self, t: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(t))
    }

    /// Checks the supplied exact derivative against a central difference of
    /// the evaluator at the given points (used by the type's own tests and by
    /// callers that want to validate hand-written derivatives).
    pub fn derivative_matches_difference(&self, ts: &[f64], rel_tol: f64) -> bool {
        let Some(d) = &self.derivative else { return false };
        ts.iter().all(|&t| {
            let h = 1e-6 * t.abs().max(1.0);
            let fd = (self.eval(t + h) - self.eval(t - h)) / (2.0 * h);
            (d(t) - fd).abs() <= rel_tol * fd.abs().max(1.0)
        })
    }
}

/// A first-order IVP driven by the weighted derivative:
/// D_ψ x(t) = F(t, x(t)), x(t_start) = x0.
#[derive(Clone)]
pub struct ConformableIvp {
    dimension: usize,
    rhs: RhsFn,
    weight: WeightSpec,
    x0: Vec<f64>,
    t_span: (f64, f64),
}

impl ConformableIvp {
    pub fn new(
        dimension: usize,
        rhs: RhsFn,
        weight: WeightSpec,
        x0: Vec<f64>,
        t_span: (f64, f64),
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if x0.len() != dimension {
            return Err(Error::InvalidParameter(format!(
                "x0 has {} entries for dimension {}",
                x0.len(),
                dimension
            )));
        }
        if !(t_span.0 >= 0.0 && t_span.1 > t_span.0) {
            return Err(Error::InvalidParameter(format!(
                "t_span must satisfy 0 <= start < end, got [{}, {}]",
                t_span.0, t_span.1
            )));
        }
        Ok(Self { dimension, rhs, weight, x0, t_span })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn t_span(&self) -> (f64, f64) {
        self.t_span
    }

    pub fn eval_rhs(&self, t: f64, x: &[f64], out: &mut [f64]) {
        (self.rhs)(t, x, out);
    }

    pub fn rhs(&self) -> RhsFn {
        Arc::clone(&self.rhs)
    }
}

/// A classical first-order IVP: dy/dτ = G(τ, y), y(τ_start) = y0.
#[derive(Clone)]
pub struct ClassicalIvp {
    dimension: usize,
    rhs: RhsFn,
    y0: Vec<f64>,
    tau_span: (f64, f64),
}

impl ClassicalIvp {
    pub fn new(dimension: usize, rhs: RhsFn, y0: Vec<f64>, tau_span: (f64, f64)) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if y0.len() != dimension {
            return Err(Error::InvalidParameter(format!(
                "y0 has {} entries for dimension {}",
                y0.len(),
                dimension
            )));
        }
        if !(tau_span.1 > tau_span.0) {
            return Err(Error::InvalidParameter(format!(
                "tau_span must be ordered, got [{}, {}]",
                tau_span.0, tau_span.1
            )));
        }
        Ok(Self { dimension, rhs, y0, tau_span })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn y0(&self) -> &[f64] {
        &self.y0
    }

    pub fn tau_span(&self) -> (f64, f64) {
        self.tau_span
    }

    pub fn eval_rhs(&self, tau: f64, y: &[f64], out: &mut [f64]) {
        (self.rhs)(tau, y, out);
    }

    pub fn rhs(&self) -> RhsFn {
        Arc::clone(&self.rhs)
    }
}

// Difference-quotient ladder: eps_k = 1e-2 * 2^{-k}, k = 0..=10.
const LIMIT_EPS_BASE: f64 = 1e-2;
const LIMIT_LEVELS: usize = 11;
// Successive Richardson-extrapolated estimates must settle to this relative
// tolerance or the function is declared not differentiable in the weighted
// sense at the queried point.
const LIMIT_SETTLE_TOL: f64 = 1e-4;

/// Weighted derivative by its defining limit.
///
/// Evaluates the difference quotient [f(t + ε·ψ(t)) − f(t)]/ε on the ladder
/// ε = 1e-2·2^{−k}, k = 0..10, applies one Richardson extrapolation step, and
/// returns the final extrapolated value. Divergence of the last two estimates
/// beyond 1e-4 (relative) is reported as [`Error::LimitNoConvergence`].
///
/// At t = 0 with a weight that is singular there, the value is defined by
/// continuity: the limit is estimated at t = 1e-3, 1e-4, 1e-5 and Aitken-
/// extrapolated to 0.
pub fn conf_derivative_limit(f: &ScalarFunction, spec: &WeightSpec, t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::Domain(format!("derivative requires t >= 0, got {t}")));
    }
    if t == 0.0 && spec.psi(0.0).is_err() {
        // Continuity convention at the singular endpoint.
        let ts = [1e-3, 1e-4, 1e-5];
        let mut v = [0.0; 3];
        for (vi, &ti) in v.iter_mut().zip(&ts) {
            *vi = limit_at(f, spec, ti)?;
        }
        let d1 = v[1] - v[0];
        let d2 = v[2] - v[1];
        let denom = d2 - d1;
        if denom.abs() < 1e-300 {
            return Ok(v[2]);
        }
        return Ok(v[2] - d2 * d2 / denom); // Aitken delta-squared
    }
    limit_at(f, spec, t)
}

fn limit_at(f: &ScalarFunction, spec: &WeightSpec, t: f64) -> Result<f64> {
    let psi = spec.psi(t)?;
    let f0 = f.eval(t);
    let mut quotients = [0.0; LIMIT_LEVELS];
    for (k, q) in quotients.iter_mut().enumerate() {
        let eps = LIMIT_EPS_BASE * 0.5f64.powi(k as i32);
        *q = (f.eval(t + eps * psi) - f0) / eps;
    }
    // One Richardson step: the quotient error is first order in eps, so
    // 2 Q(eps/2) - Q(eps) cancels the leading term.
    let r = |k: usize| 2.0 * quotients[k + 1] - quotients[k];
    let last = r(LIMIT_LEVELS - 2);
    let prev = r(LIMIT_LEVELS - 3);
    let change = (last - prev).abs();
    if !last.is_finite() || change > LIMIT_SETTLE_TOL * last.abs().max(1.0) {
        return Err(Error::LimitNoConvergence { t, last_change: change });
    }
    Ok(last)
}

/// Weighted derivative in product form: ψ_α(t)·f′(t).
///
/// Requires the exact derivative; errors with [`Error::MissingDerivative`]
/// otherwise.
pub fn conf_derivative_product(f: &ScalarFunction, spec: &WeightSpec, t: f64) -> Result<f64> {
    let df = f.derivative_at(t).ok_or(Error::MissingDerivative)?;
    Ok(spec.psi(t)? * df)
}

/// Rewrites a weighted IVP as a classical IVP in the reparametrized time:
/// G(τ, y) = F(φ⁻¹(τ), y), τ_span = [φ(t_start), φ(t_end)], y0 = x0.
///
/// For autonomous systems G is F unchanged; only the time argument is
/// re-labeled. If φ⁻¹ fails during a later solve (possible for `Custom`
/// weights only), the returned right-hand side yields NaN and the solver
/// reports blow-up.
pub fn reparametrize(ivp: &ConformableIvp) -> Result<ClassicalIvp> {
    let (t0, t1) = ivp.t_span();
    let tau_span = (ivp.weight().phi(t0)?, ivp.weight().phi(t1)?);
    let weight = ivp.weight().clone();
    let rhs = ivp.rhs();
    let g: RhsFn = Arc::new(move |tau, y, out| match weight.phi_inverse(tau) {
        Ok(t) => rhs(t, y, out),
        Err(_) => out.fill(f64::NAN),
    });
    ClassicalIvp::new(ivp.dimension(), g, ivp.x0().to_vec(), tau_span)
}

// Queries landing within this relative distance of a solver node reuse the
// node's state verbatim instead of interpolating.
const NODE_ALIGN_TOL: f64 = 1e-12;

/// Maps a classical trajectory y(τ) back to original time: x(t) = y(φ(t)).
///
/// States are cubically interpolated on the solver's own τ nodes; queries
/// aligned with a node (to 1e-12 relative) copy the node state exactly.
/// Every φ(t) must fall inside the solved τ range.
pub fn pull_back(classical: &Trajectory, spec: &WeightSpec, t_grid: &[f64]) -> Result<Trajectory> {
    let taus = classical.times();
    let (lo, hi) = (taus[0], taus[classical.len() - 1]);
    let slack = 1e-9 * hi.abs().max(1.0);
    let dim = classical.dimension();

    let mut states = Vec::with_capacity(t_grid.len() * dim);
    for &t in t_grid {
        let tau = spec.phi(t)?;
        if tau < lo - slack || tau > hi + slack {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let tau = tau.clamp(lo, hi);
        // Node-aligned fast path.
        let idx = taus.partition_point(|&v| v < tau);
        let aligned = [idx.saturating_sub(1), idx.min(taus.len() - 1)]
            .into_iter()
            .find(|&j| (taus[j] - tau).abs() <= NODE_ALIGN_TOL * taus[j].abs().max(1.0));
        if let Some(j) = aligned {
            states.extend_from_slice(classical.state(j));
        } else {
            for c in 0..dim {
                let column: Vec<f64> = (0..classical.len())
                    .map(|i| classical.state(i)[c])
                    .collect();
                states.push(numerics::cubic_interp(taus, &column, tau));
            }
        }
    }
    Trajectory::new(
        t_grid.to_vec(),
        states,
        dim,
        TrajectoryMeta {
            solver: format!("pullback({})", classical.meta().solver),
            detail: classical.meta().detail.clone(),
            weight: Some(spec.summary()),
        },
    )
}

/// Transforms linear-equation coefficients under the time substitution,
/// with the weight-power reading of the operator: each coefficient becomes
/// ã_k(τ) = a_k(φ⁻¹(τ))·ψ(φ⁻¹(τ))^{k−n}.
///
/// `coeffs[k]` multiplies the k-th-order term of an n-th-order equation
/// (k = 0..n−1, with the n-th-order term monic on the left side). See
/// [`transform_linear_ode_iterated`] for the iterated-operator reading, under
/// which the weight powers cancel.
pub fn transform_linear_ode(coeffs: &[RealFn], spec: &WeightSpec) -> Vec<RealFn> {
    let n = coeffs.len() as i32;
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let a = Arc::clone(a);
            let w = spec.clone();
            let power = k as i32 - n;
            let f: RealFn = Arc::new(move |tau| {
                let (t, psi) = match w.phi_inverse(tau).and_then(|t| Ok((t, w.psi(t)?))) {
                    Ok(pair) => pair,
                    Err(_) => return f64::NAN,
                };
                a(t) * psi.powi(power)
            });
            f
        })
        .collect()
}

/// Transforms linear-equation coefficients under the iterated-operator
/// reading, where the k-th operator power means k successive applications.
///
/// Each application of the weighted derivative is exactly d/dτ in the
/// reparametrized time, so coefficients keep their values and only their time
/// argument changes: ã_k(τ) = a_k(φ⁻¹(τ)). Constant coefficients pass through
/// unchanged.
pub fn transform_linear_ode_iterated(coeffs: &[RealFn], spec: &WeightSpec) -> Vec<RealFn> {
    coeffs
        .iter()
        .map(|a| {
            let a = Arc::clone(a);
            let w = spec.clone();
            let f: RealFn = Arc::new(move |tau| match w.phi_inverse(tau) {
                Ok(t) => a(t),
                Err(_) => f64::NAN,
            });
            f
        })
        .collect()
}

/// Builds the first-order companion system of the monic linear equation
/// x^{(n)}(τ) = Σ_{k<n} ã_k(τ)·x^{(k)}(τ).
///
/// State layout: y = (x, x′, ..., x^{(n−1)}); `y0` supplies those initial
/// values at `tau_span.0`.
pub fn companion_ivp(
    coeffs_tau: Vec<RealFn>,
    y0: Vec<f64>,
    tau_span: (f64, f64),
) -> Result<ClassicalIvp> {
    let n = coeffs_tau.len();
    if n == 0 {
        return Err(Error::InvalidParameter("companion system needs n >= 1".into()));
    }
    let rhs: RhsFn = Arc::new(move |tau, y, out| {
        out[..n - 1].copy_from_slice(&y[1..n]);
        out[n - 1] = coeffs_tau
            .iter()
            .zip(y.iter())
            .map(|(a, &yk)| a(tau) * yk)
            .sum();
    });
    ClassicalIvp::new(n, rhs, y0, tau_span)
}
