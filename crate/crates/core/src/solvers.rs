//! Explicit Runge–Kutta integrators, a direct weighted-derivative solver, the
//! fractional Adams–Bashforth–Moulton scheme, and trajectory comparison.
//!
//! Three routes to the same (or deliberately different) dynamics:
//! [`integrate_classical`] solves dy/dτ = G(τ, y); [`integrate_conformable_direct`]
//! solves the weighted system in original time as x′ = F(t, x)/ψ(t); and
//! [`integrate_caputo_abm`] solves a genuinely nonlocal Caputo system with the
//! full-memory predictor–corrector scheme. The first two agree through the
//! time substitution τ = φ(t); the third does not, which is the point.

use crate::analytic::gamma_function;
use crate::conformable::{reparametrize, ClassicalIvp, ConformableIvp, RhsFn};
use crate::error::{Error, Result};
use crate::weights::WeightSpec;

// Borrowed form of [`RhsFn`] used by the private integrator kernels.
type RhsRef<'a> = &'a dyn Fn(f64, &[f64], &mut [f64]);

/// Integrator selection: classical fixed-step RK4 or adaptive
/// Dormand–Prince 5(4).
#[derive(Debug, Clone, PartialEq)]
pub enum SolverMethod {
    RK4Fixed { h: f64 },
    RK45Adaptive { abs_tol: f64, rel_tol: f64 },
}

impl SolverMethod {
    fn validate(&self) -> Result<()> {
        match *self {
            SolverMethod::RK4Fixed { h } if !(h > 0.0) => {
                Err(Error::InvalidParameter(format!("step must be positive, got {h}")))
            }
            SolverMethod::RK45Adaptive { abs_tol, rel_tol }
                if !(abs_tol > 0.0 && rel_tol > 0.0) =>
            {
                Err(Error::InvalidParameter(format!(
                    "tolerances must be positive, got abs_tol={abs_tol}, rel_tol={rel_tol}"
                )))
            }
            _ => Ok(()),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            SolverMethod::RK4Fixed { .. } => "RK4Fixed",
            SolverMethod::RK45Adaptive { .. } => "RK45Adaptive",
        }
    }

    fn detail(&self) -> String {
        match self {
            SolverMethod::RK4Fixed { h } => format!("h={h}"),
            SolverMethod::RK45Adaptive { abs_tol, rel_tol } => {
                format!("abs_tol={abs_tol},rel_tol={rel_tol}")
            }
        }
    }
}

/// Solver settings; `start_offset` applies only to direct weighted solves,
/// which cannot start at t = 0 when 1/ψ is singular there.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    method: SolverMethod,
    start_offset: f64,
}

pub const DEFAULT_START_OFFSET: f64 = 1e-2;

impl SolverConfig {
    pub fn new(method: SolverMethod) -> Result<Self> {
        method.validate()?;
        Ok(Self { method, start_offset: DEFAULT_START_OFFSET })
    }

    pub fn rk4(h: f64) -> Result<Self> {
        Self::new(SolverMethod::RK4Fixed { h })
    }

    pub fn rk45(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        Self::new(SolverMethod::RK45Adaptive { abs_tol, rel_tol })
    }

    pub fn with_start_offset(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "start offset must be positive, got {eps}"
            )));
        }
        self.start_offset = eps;
        Ok(self)
    }

    pub fn method(&self) -> &SolverMethod {
        &self.method
    }

    pub fn start_offset(&self) -> f64 {
        self.start_offset
    }
}

impl Default for SolverConfig {
    /// Adaptive Dormand–Prince at 1e-10 absolute/relative tolerance.
    fn default() -> Self {
        Self {
            method: SolverMethod::RK45Adaptive { abs_tol: 1e-10, rel_tol: 1e-10 },
            start_offset: DEFAULT_START_OFFSET,
        }
    }
}

/// Metadata carried alongside a trajectory: which solver produced it, with
/// what step/tolerance, and (for weighted solves) which weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub solver: String,
    pub detail: String,
    pub weight: Option<String>,
}

/// A sampled solution: strictly increasing times with one state row each.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<f64>, // row-major, len = times.len() * dimension
    dimension: usize,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        states: Vec<f64>,
        dimension: usize,
        meta: TrajectoryMeta,
    ) -> Result<Self> {
        if dimension == 0 || times.is_empty() {
            return Err(Error::InvalidParameter(
                "trajectory needs dimension >= 1 and at least one sample".into(),
            ));
        }
        if states.len() != times.len() * dimension {
            return Err(Error::InvalidParameter(format!(
                "state storage has {} entries, expected {}",
                states.len(),
                times.len() * dimension
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("times must be strictly increasing".into()));
        }
        Ok(Self { times, states, dimension, meta })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn last_state(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    /// Copy of one state component over all times.
    pub fn component(&self, c: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.state(i)[c]).collect()
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }
}

// Fixed-step classical RK4 over `span`, recording every node.
fn rk4_solve(
    rhs: RhsRef,
    y0: &[f64],
    span: (f64, f64),
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = y0.len();
    let (t0, t1) = span;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut times = vec![t0];
    let mut states = y.clone();

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];

    while t < t1 {
        let step = h.min(t1 - t);
        rhs(t, &y, &mut k1);
        for i in 0..dim {
            stage[i] = y[i] + 0.5 * step * k1[i];
        }
        rhs(t + 0.5 * step, &stage, &mut k2);
        for i in 0..dim {
            stage[i] = y[i] + 0.5 * step * k2[i];
        }
        rhs(t + 0.5 * step, &stage, &mut k3);
        for i in 0..dim {
            stage[i] = y[i] + step * k3[i];
        }
        rhs(t + step, &stage, &mut k4);
        for i in 0..dim {
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState(t + step));
        }
        // Guard against a vanishing final sliver stalling the loop.
        t = if t1 - (t + step) < 1e-14 * (t1.abs().max(1.0)) { t1 } else { t + step };
        times.push(t);
        states.extend_from_slice(&y);
    }
    Ok((times, states))
}

// Dormand–Prince 5(4) coefficients.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights (row 7 of A) and the embedded fourth-order weights.
const DP_B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MIN_STEP: f64 = 1e-14;

// Adaptive Dormand–Prince with the standard PI-free step controller:
// factor 0.9·err^{-1/5}, clamped to [0.2, 5].
fn rk45_solve(
    rhs: RhsRef,
    y0: &[f64],
    span: (f64, f64),
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = y0.len();
    let (t0, t1) = span;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut times = vec![t0];
    let mut states = y.clone();

    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; dim]).collect();
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];

    let mut h = (t1 - t0) * 1e-3;

    while t < t1 {
        h = h.min(t1 - t);
        if h < MIN_STEP {
            return Err(Error::StepUnderflow { t, h });
        }

        rhs(t, &y, &mut k[0]);
        if k[0].iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState(t));
        }
        for s in 0..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, &a) in DP_A[s].iter().enumerate() {
                    acc += a * k[j][i];
                }
                stage[i] = y[i] + h * acc;
            }
            rhs(t + DP_C[s] * h, &stage, &mut k[s + 1]);
        }
        for i in 0..dim {
            let mut acc = 0.0;
            for s in 0..7 {
                acc += DP_B5[s] * k[s][i];
            }
            y_new[i] = y[i] + h * acc;
        }

        // Embedded error, scaled per component.
        let mut err_sq = 0.0;
        let mut finite = true;
        for i in 0..dim {
            let mut diff = 0.0;
            for s in 0..7 {
                diff += (DP_B5[s] - DP_B4[s]) * k[s][i];
            }
            diff *= h;
            let scale = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
            let r = diff / scale;
            err_sq += r * r;
            finite &= y_new[i].is_finite();
        }
        let err = (err_sq / dim as f64).sqrt();

        if !finite || !err.is_finite() {
            // Trial step blew up: shrink hard and retry.
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y_new);
            times.push(t);
            states.extend_from_slice(&y);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok((times, states))
}

fn solve_with_method(
    rhs: RhsRef,
    y0: &[f64],
    span: (f64, f64),
    method: &SolverMethod,
) -> Result<(Vec<f64>, Vec<f64>)> {
    match *method {
        SolverMethod::RK4Fixed { h } => rk4_solve(rhs, y0, span, h),
        SolverMethod::RK45Adaptive { abs_tol, rel_tol } => {
            rk45_solve(rhs, y0, span, abs_tol, rel_tol)
        }
    }
}

/// Solves a classical IVP dy/dτ = G(τ, y) over its τ span.
pub fn integrate_classical(ivp: &ClassicalIvp, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.method().validate()?;
    let rhs = |tau: f64, y: &[f64], out: &mut [f64]| ivp.eval_rhs(tau, y, out);
    let (times, states) = solve_with_method(&rhs, ivp.y0(), ivp.tau_span(), cfg.method())?;
    Trajectory::new(
        times,
        states,
        ivp.dimension(),
        TrajectoryMeta {
            solver: cfg.method().name().into(),
            detail: format!("classical,{}", cfg.method().detail()),
            weight: None,
        },
    )
}

/// Solves a weighted IVP directly in original time as x′ = F(t, x)/ψ(t).
///
/// Integration starts at t₀ = max(t_start, ε₀) because 1/ψ is singular at 0
/// for the power-type weights; the state at t₀ is seeded by solving the
/// reparametrized classical problem over [φ(t_start), φ(t₀)] at tolerance
/// 1e-12. The returned trajectory covers [t₀, t_end].
pub fn integrate_conformable_direct(
    ivp: &ConformableIvp,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    cfg.method().validate()?;
    let (t_start, t_end) = ivp.t_span();
    let t0 = t_start.max(cfg.start_offset());
    if t0 >= t_end {
        return Err(Error::InvalidParameter(format!(
            "span [{t_start}, {t_end}] lies below the start offset {}",
            cfg.start_offset()
        )));
    }
    // ψ must be evaluable on [t0, t_end]; this rejects a singular weight at
    // an exactly-zero start offset.
    ivp.weight().psi(t0)?;

    let mut y0 = ivp.x0().to_vec();
    if t0 > t_start {
        let classical = reparametrize(ivp)?;
        let tau_span = (ivp.weight().phi(t_start)?, ivp.weight().phi(t0)?);
        let seed = ClassicalIvp::new(ivp.dimension(), classical.rhs(), y0.clone(), tau_span)?;
        let tight = SolverConfig::rk45(1e-12, 1e-12)?;
        y0 = integrate_classical(&seed, &tight)?.last_state().to_vec();
    }

    let weight = ivp.weight().clone();
    let inner = ivp.rhs();
    let rhs = move |t: f64, y: &[f64], out: &mut [f64]| {
        inner(t, y, out);
        match weight.psi(t) {
            Ok(psi) => out.iter_mut().for_each(|v| *v /= psi),
            Err(_) => out.fill(f64::NAN),
        }
    };
    let (times, states) = solve_with_method(&rhs, &y0, (t0, t_end), cfg.method())?;
    Trajectory::new(
        times,
        states,
        ivp.dimension(),
        TrajectoryMeta {
            solver: cfg.method().name().into(),
            detail: format!("direct,t0={t0},{}", cfg.method().detail()),
            weight: Some(ivp.weight().summary()),
        },
    )
}

/// A Caputo-fractional IVP D^α x(t) = F(t, x(t)), x(0) = x0, on the uniform
/// grid tᵢ = i·h covering [0, t_end].
#[derive(Clone)]
pub struct CaputoIvp {
    dimension: usize,
    rhs: RhsFn,
    alpha: f64,
    x0: Vec<f64>,
    t_end: f64,
    h: f64,
    n_steps: usize,
}

impl CaputoIvp {
    pub fn new(
        dimension: usize,
        rhs: RhsFn,
        alpha: f64,
        x0: Vec<f64>,
        t_end: f64,
        h: f64,
    ) -> Result<Self> {
        if dimension == 0 || x0.len() != dimension {
            return Err(Error::InvalidParameter("state size must match dimension >= 1".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(t_end > 0.0 && h > 0.0) {
            return Err(Error::InvalidParameter("t_end and h must be positive".into()));
        }
        let n = (t_end / h).round();
        if n < 1.0 || (n * h - t_end).abs() > 1e-9 * t_end {
            return Err(Error::InvalidParameter(format!(
                "h = {h} does not uniformly divide t_end = {t_end}"
            )));
        }
        Ok(Self { dimension, rhs, alpha, x0, t_end, h, n_steps: n as usize })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn eval_rhs(&self, t: f64, x: &[f64], out: &mut [f64]) {
        (self.rhs)(t, x, out);
    }
}

/// Fractional Adams quadrature weights for the step to t_{n+1}.
///
/// Returns the predictor weights b_{j,n+1} = (h^α/α)·((n+1−j)^α − (n−j)^α)
/// for j = 0..=n and the corrector weights a_{j,n+1} = (h^α/(α(α+1)))·c_j
/// with c_0 = n^{α+1} − (n−α)(n+1)^α,
/// c_j = (n−j+2)^{α+1} + (n−j)^{α+1} − 2(n−j+1)^{α+1} for 1 ≤ j ≤ n, and
/// c_{n+1} = 1. At α = 1 these collapse to the rectangle and trapezoid rules.
pub fn abm_weights(alpha: f64, h: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let ha = h.powf(alpha);
    let pb = ha / alpha;
    let pa = ha / (alpha * (alpha + 1.0));

    let b: Vec<f64> = (0..=n)
        .map(|j| {
            let m = (n - j) as f64;
            pb * ((m + 1.0).powf(alpha) - m.powf(alpha))
        })
        .collect();

    let nf = n as f64;
    let mut a = Vec::with_capacity(n + 2);
    a.push(pa * (nf.powf(alpha + 1.0) - (nf - alpha) * (nf + 1.0).powf(alpha)));
    for j in 1..=n {
        let m = (n - j) as f64;
        a.push(pa * ((m + 2.0).powf(alpha + 1.0) + m.powf(alpha + 1.0)
            - 2.0 * (m + 1.0).powf(alpha + 1.0)));
    }
    a.push(pa);
    Ok((b, a))
}

/// Solves a Caputo IVP with the predictor–corrector (PECE) Adams scheme,
/// retaining the full memory sum at every step (O(N²) work, no truncation).
///
/// Predictor: x^P_{n+1} = x0 + (1/Γ(α)) Σ_{j≤n} b_{j,n+1} F(t_j, x_j).
/// Corrector: x_{n+1} = x0 + (1/Γ(α)) [Σ_{j≤n} a_{j,n+1} F(t_j, x_j)
///            + a_{n+1,n+1} F(t_{n+1}, x^P_{n+1})].
pub fn integrate_caputo_abm(ivp: &CaputoIvp) -> Result<Trajectory> {
    let dim = ivp.dimension();
    let n_steps = ivp.n_steps;
    let h = ivp.h;
    let inv_gamma = 1.0 / gamma_function(ivp.alpha)?;

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity((n_steps + 1) * dim);
    // F(t_j, x_j) history, row-major like states.
    let mut history = Vec::with_capacity((n_steps + 1) * dim);

    times.push(0.0);
    states.extend_from_slice(ivp.x0());
    let mut f0 = vec![0.0; dim];
    ivp.eval_rhs(0.0, ivp.x0(), &mut f0);
    history.extend_from_slice(&f0);

    let mut pred = vec![0.0; dim];
    let mut f_pred = vec![0.0; dim];
    for n in 0..n_steps {
        let t_next = (n + 1) as f64 * h;
        let (b, a) = abm_weights(ivp.alpha, h, n)?;

        for i in 0..dim {
            let mem: f64 = (0..=n).map(|j| b[j] * history[j * dim + i]).sum();
            pred[i] = ivp.x0()[i] + inv_gamma * mem;
        }
        ivp.eval_rhs(t_next, &pred, &mut f_pred);

        for i in 0..dim {
            let mem: f64 = (0..=n).map(|j| a[j] * history[j * dim + i]).sum();
            let xi = ivp.x0()[i] + inv_gamma * (mem + a[n + 1] * f_pred[i]);
            if !xi.is_finite() {
                return Err(Error::NonFiniteState(t_next));
            }
            states.push(xi);
        }
        times.push(t_next);
        let x_new = &states[(n + 1) * dim..(n + 2) * dim];
        let mut f_new = vec![0.0; dim];
        ivp.eval_rhs(t_next, x_new, &mut f_new);
        history.extend_from_slice(&f_new);
    }

    Trajectory::new(
        times,
        states,
        dim,
        TrajectoryMeta {
            solver: "CaputoABM".into(),
            detail: format!("alpha={},h={h}", ivp.alpha),
            weight: None,
        },
    )
}

/// Outcome of comparing a direct weighted trajectory against a pulled-back
/// classical one on the direct trajectory's own time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// Max |direct − pullback| per state component.
    pub per_component: Vec<f64>,
    /// Largest deviation over all components and times.
    pub max_deviation: f64,
    /// Time at which the largest deviation occurs.
    pub time_of_max: f64,
    pub grid_size: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Quantifies agreement between a direct weighted solve and a classical solve
/// pulled back through τ = φ(t). The verdict passes when the worst deviation
/// over the direct trajectory's nodes is within `tolerance`.
pub fn equivalence_report(
    direct: &Trajectory,
    classical: &Trajectory,
    spec: &WeightSpec,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    if direct.dimension() != classical.dimension() {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch: {} vs {}",
            direct.dimension(),
            classical.dimension()
        )));
    }
    let pulled = crate::conformable::pull_back(classical, spec, direct.times())?;
    let dim = direct.dimension();
    let mut per_component = vec![0.0f64; dim];
    let mut max_deviation = 0.0f64;
    let mut time_of_max = direct.times()[0];
    for i in 0..direct.len() {
        for (c, worst) in per_component.iter_mut().enumerate() {
            let dev = (direct.state(i)[c] - pulled.state(i)[c]).abs();
            if dev > *worst {
                *worst = dev;
            }
            if dev > max_deviation {
                max_deviation = dev;
                time_of_max = direct.times()[i];
            }
        }
    }
    Ok(EquivalenceReport {
        per_component,
        max_deviation,
        time_of_max,
        grid_size: direct.len(),
        tolerance,
        passed: max_deviation <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSpec;
    use std::sync::Arc;

    fn scalar_ivp(rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> RhsFn {
        Arc::new(move |t, y, out| out[0] = rhs(t, y[0]))
    }

    #[test]
    fn constant_rhs_gives_constant_trajectory() {
        let ivp = ClassicalIvp::new(1, scalar_ivp(|_, _| 0.0), vec![3.5], (0.0, 2.0)).unwrap();
        for cfg in [SolverConfig::rk4(0.1).unwrap(), SolverConfig::rk45(1e-8, 1e-8).unwrap()] {
            let traj = integrate_classical(&ivp, &cfg).unwrap();
            assert!(traj.times().iter().all(|&t| (0.0..=2.0).contains(&t)));
            assert!((0..traj.len()).all(|i| traj.state(i)[0] == 3.5));
        }
    }

    #[test]
    fn rk4_exponential_reference() {
        let ivp = ClassicalIvp::new(1, scalar_ivp(|_, y| y), vec![1.0], (0.0, 1.0)).unwrap();
        let traj = integrate_classical(&ivp, &SolverConfig::rk4(1e-3).unwrap()).unwrap();
        let err = (traj.last_state()[0] - std::f64::consts::E).abs();
        assert!(err <= 1e-9, "RK4 error {err}");
    }

    #[test]
    fn rk45_exponential_tight_tolerance() {
        let ivp = ClassicalIvp::new(1, scalar_ivp(|_, y| y), vec![1.0], (0.0, 1.0)).unwrap();
        let traj = integrate_classical(&ivp, &SolverConfig::rk45(1e-12, 1e-12).unwrap()).unwrap();
        let err = (traj.last_state()[0] - std::f64::consts::E).abs();
        assert!(err <= 1e-10, "RK45 error {err}");
    }

    #[test]
    fn rk4_error_drops_at_least_twelvefold_when_halving() {
        let ivp = ClassicalIvp::new(1, scalar_ivp(|_, y| y), vec![1.0], (0.0, 1.0)).unwrap();
        let run = |h: f64| {
            let traj = integrate_classical(&ivp, &SolverConfig::rk4(h).unwrap()).unwrap();
            (traj.last_state()[0] - std::f64::consts::E).abs()
        };
        let (coarse, fine) = (run(0.1), run(0.05));
        assert!(coarse / fine >= 12.0, "order ratio {}", coarse / fine);
    }

    #[test]
    fn rk45_reports_blowup() {
        // y' = y^2 escapes to infinity at tau = 1.
        let ivp = ClassicalIvp::new(1, scalar_ivp(|_, y| y * y), vec![1.0], (0.0, 2.0)).unwrap();
        match integrate_classical(&ivp, &SolverConfig::rk45(1e-10, 1e-10).unwrap()) {
            Err(Error::StepUnderflow { t, .. }) | Err(Error::NonFiniteState(t)) => {
                assert!((t - 1.0).abs() < 0.05, "blow-up detected at {t}")
            }
            other => panic!("expected blow-up error, got {other:?}"),
        }
    }

    #[test]
    fn config_and_trajectory_validation() {
        assert!(SolverConfig::rk4(0.0).is_err());
        assert!(SolverConfig::rk45(1e-8, 0.0).is_err());
        assert!(SolverConfig::rk4(0.1).unwrap().with_start_offset(0.0).is_err());
        assert_eq!(SolverConfig::default().start_offset(), 1e-2);

        let meta = TrajectoryMeta { solver: "x".into(), detail: String::new(), weight: None };
        assert!(Trajectory::new(vec![0.0, 0.0], vec![1.0, 2.0], 1, meta.clone()).is_err());
        assert!(Trajectory::new(vec![0.0, 1.0], vec![1.0], 1, meta.clone()).is_err());
        assert!(Trajectory::new(vec![], vec![], 1, meta).is_err());
    }

    #[test]
    fn direct_solve_matches_growth_closed_form() {
        // Weighted growth x' = x with the square-root power weight has the
        // closed form e^{2 sqrt t}; at t = 4 that is e^4.
        let w = WeightSpec::power_law(0.5).unwrap();
        let ivp =
            ConformableIvp::new(1, scalar_ivp(|_, y| y), w, vec![1.0], (0.0, 4.0)).unwrap();
        let traj = integrate_conformable_direct(&ivp, &SolverConfig::default()).unwrap();
        let got = traj.last_state()[0];
        let want = 54.598150033144239; // e^4, 30-digit arithmetic
        assert!(
            ((got - want) / want).abs() <= 1e-3,
            "direct solve gave {got}, closed form {want}"
        );
        assert_eq!(traj.times()[0], 1e-2);
    }

    #[test]
    fn direct_alpha_one_reduces_to_classical() {
        let w = WeightSpec::power_law(1.0).unwrap();
        let conf =
            ConformableIvp::new(1, scalar_ivp(|_, y| -y), w.clone(), vec![1.0], (0.0, 1.0))
                .unwrap();
        let cfg = SolverConfig::rk4(1e-3).unwrap();
        let direct = integrate_conformable_direct(&conf, &cfg).unwrap();
        let classical = integrate_classical(&reparametrize(&conf).unwrap(), &cfg).unwrap();
        let report = equivalence_report(&direct, &classical, &w, 1e-9).unwrap();
        assert!(report.passed, "max deviation {}", report.max_deviation);
    }

    #[test]
    fn direct_solve_rejects_span_below_offset() {
        let w = WeightSpec::power_law(0.5).unwrap();
        let ivp =
            ConformableIvp::new(1, scalar_ivp(|_, y| y), w, vec![1.0], (0.0, 0.005)).unwrap();
        assert!(integrate_conformable_direct(&ivp, &SolverConfig::default()).is_err());
    }

    #[test]
    fn equivalence_of_identical_trajectories() {
        let meta = TrajectoryMeta { solver: "x".into(), detail: String::new(), weight: None };
        let traj =
            Trajectory::new(vec![1.0, 2.0, 3.0], vec![1.0, 4.0, 9.0], 1, meta).unwrap();
        let w = WeightSpec::power_law(1.0).unwrap();
        let report = equivalence_report(&traj, &traj, &w, 1e-15).unwrap();
        assert_eq!(report.max_deviation, 0.0);
        assert!(report.passed);
        assert_eq!(report.grid_size, 3);
    }

    #[test]
    fn abm_weights_collapse_at_alpha_one() {
        let (b, a) = abm_weights(1.0, 0.02, 5).unwrap();
        // Rectangle rule for the predictor...
        assert!(b.iter().all(|&w| (w - 0.02).abs() < 1e-15));
        // ...trapezoid for the corrector.
        assert!((a[0] - 0.01).abs() < 1e-15);
        assert!((a[6] - 0.01).abs() < 1e-15);
        assert!(a[1..6].iter().all(|&w| (w - 0.02).abs() < 1e-14));
    }

    #[test]
    fn abm_predictor_weight_reference() {
        // j = n term at alpha = 0.5, h = 0.1: 0.1^0.5/0.5; 30-digit value.
        let (b, _) = abm_weights(0.5, 0.1, 7).unwrap();
        assert!((b[7] - 0.6324555320336759).abs() < 1e-15);
    }

    #[test]
    fn abm_weights_positive() {
        for &alpha in &[0.3, 0.5, 0.7, 0.9] {
            for n in (0..=200).step_by(13) {
                let (b, a) = abm_weights(alpha, 0.05, n).unwrap();
                assert_eq!(b.len(), n + 1);
                assert_eq!(a.len(), n + 2);
                assert!(b.iter().all(|&w| w > 0.0 && w.is_finite()));
                assert!(a.iter().all(|&w| w > 0.0 && w.is_finite()));
            }
        }
    }

    #[test]
    fn caputo_alpha_one_matches_exponential() {
        let ivp =
            CaputoIvp::new(1, scalar_ivp(|_, y| -y), 1.0, vec![1.0], 5.0, 0.01).unwrap();
        let traj = integrate_caputo_abm(&ivp).unwrap();
        let worst = traj
            .times()
            .iter()
            .enumerate()
            .map(|(i, &t)| (traj.state(i)[0] - (-t).exp()).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-3, "worst deviation from e^-t: {worst}");
    }

    #[test]
    fn caputo_zero_rhs_stays_constant() {
        let ivp =
            CaputoIvp::new(2, Arc::new(|_t, _y, out: &mut [f64]| out.fill(0.0)), 0.6,
                vec![1.5, -2.0], 3.0, 0.05)
                .unwrap();
        let traj = integrate_caputo_abm(&ivp).unwrap();
        for i in 0..traj.len() {
            assert_eq!(traj.state(i), &[1.5, -2.0]);
        }
    }

    #[test]
    fn caputo_error_decreases_as_steps_halve() {
        // At alpha = 1 the scheme is a trapezoid PECE; its global error on
        // y' = -y must shrink monotonically across h = 0.04, 0.02, 0.01.
        let errs: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&h| {
                let ivp =
                    CaputoIvp::new(1, scalar_ivp(|_, y| -y), 1.0, vec![1.0], 2.0, h).unwrap();
                let traj = integrate_caputo_abm(&ivp).unwrap();
                (traj.last_state()[0] - (-2.0f64).exp()).abs()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "errors {errs:?}");
    }

    #[test]
    fn caputo_memory_differs_from_every_weight_family() {
        // The alpha = 0.7 Caputo decay is not e^{-phi(t)} for any built-in
        // weight family: each family deviates by more than 0.005 somewhere.
        let alpha = 0.7;
        let ivp =
            CaputoIvp::new(1, scalar_ivp(|_, y| -y), alpha, vec![1.0], 5.0, 0.005).unwrap();
        let traj = integrate_caputo_abm(&ivp).unwrap();
        let families = [
            WeightSpec::power_law(alpha).unwrap(),
            WeightSpec::exponential(alpha).unwrap(),
            WeightSpec::gamma_scaled(alpha).unwrap(),
        ];
        let mut min_over_families = f64::INFINITY;
        for w in &families {
            let max_dev = traj
                .times()
                .iter()
                .enumerate()
                .map(|(i, &t)| (traj.state(i)[0] - (-w.phi(t).unwrap()).exp()).abs())
                .fold(0.0f64, f64::max);
            min_over_families = min_over_families.min(max_dev);
        }
        assert!(
            min_over_families > 0.005,
            "closest weight family deviates by only {min_over_families}"
        );
    }

    #[test]
    fn caputo_ivp_validation() {
        let rhs = scalar_ivp(|_, y| y);
        assert!(CaputoIvp::new(1, Arc::clone(&rhs), 1.2, vec![1.0], 1.0, 0.1).is_err());
        assert!(CaputoIvp::new(1, Arc::clone(&rhs), 0.5, vec![1.0], 1.0, 0.3).is_err());
        assert!(CaputoIvp::new(1, rhs, 0.5, vec![1.0], -1.0, 0.1).is_err());
    }
}
