//! The Lorenz benchmark in three formulations — classical, weighted
//! (conformable), and Caputo-fractional — plus fixed-point and linear
//! stability analysis.
//!
//! The weighted system is the classical one on a rescaled clock, so its fixed
//! points, Jacobians, and eigenvalues coincide with the classical ones; the
//! Caputo system carries genuine memory and does not. [`run_three_way`] makes
//! that comparison quantitative.

use std::sync::Arc;

use num_complex::Complex64;

use crate::conformable::{reparametrize, ClassicalIvp, ConformableIvp, RhsFn};
use crate::error::{Error, Result};
use crate::solvers::{
    equivalence_report, integrate_caputo_abm, integrate_classical, integrate_conformable_direct,
    CaputoIvp, EquivalenceReport, SolverConfig, Trajectory,
};
use crate::weights::WeightSpec;

/// Verdict tolerance for the weighted-vs-classical trajectory comparison.
pub const EQUIVALENCE_TOL: f64 = 1e-3;

/// Lorenz parameters σ, ρ, β (all strictly positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    sigma: f64,
    rho: f64,
    beta: f64,
}

impl LorenzParams {
    pub fn new(sigma: f64, rho: f64, beta: f64) -> Result<Self> {
        if !(sigma > 0.0 && rho > 0.0 && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Lorenz parameters must be positive, got sigma={sigma}, rho={rho}, beta={beta}"
            )));
        }
        Ok(Self { sigma, rho, beta })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for LorenzParams {
    /// The chaotic benchmark values σ = 10, ρ = 28, β = 8/3.
    fn default() -> Self {
        Self { sigma: 10.0, rho: 28.0, beta: 8.0 / 3.0 }
    }
}

/// Lorenz vector field (σ(y−x), ρx − y − xz, xy − βz).
pub fn lorenz_rhs(p: &LorenzParams, state: &[f64; 3]) -> [f64; 3] {
    let [x, y, z] = *state;
    [p.sigma * (y - x), p.rho * x - y - x * z, x * y - p.beta * z]
}

/// The Lorenz field as a solver-ready right-hand side.
pub fn lorenz_rhs_fn(p: &LorenzParams) -> RhsFn {
    let LorenzParams { sigma, rho, beta } = *p;
    Arc::new(move |_t, y, out| {
        out[0] = sigma * (y[1] - y[0]);
        out[1] = rho * y[0] - y[1] - y[0] * y[2];
        out[2] = y[0] * y[1] - beta * y[2];
    })
}

/// Equilibria: the origin always, and for ρ > 1 the symmetric pair
/// C± = (±√(β(ρ−1)), ±√(β(ρ−1)), ρ−1).
pub fn lorenz_fixed_points(p: &LorenzParams) -> Vec<[f64; 3]> {
    let mut points = vec![[0.0, 0.0, 0.0]];
    if p.rho > 1.0 {
        let r = (p.beta * (p.rho - 1.0)).sqrt();
        points.push([r, r, p.rho - 1.0]);
        points.push([-r, -r, p.rho - 1.0]);
    }
    points
}

/// Jacobian of the Lorenz field at a point:
/// [[−σ, σ, 0], [ρ−z, −1, −x], [y, x, −β]].
pub fn lorenz_jacobian(p: &LorenzParams, point: &[f64; 3]) -> [[f64; 3]; 3] {
    let [x, y, z] = *point;
    [
        [-p.sigma, p.sigma, 0.0],
        [p.rho - z, -1.0, -x],
        [y, x, -p.beta],
    ]
}

// Roots of the monic cubic λ³ + c2·λ² + c1·λ + c0 by Cardano's formula
// (trigonometric form when all roots are real), each polished with one
// complex Newton step, sorted by (re, im).
fn cubic_roots(c2: f64, c1: f64, c0: f64) -> [Complex64; 3] {
    // Depress: λ = s − c2/3 gives s³ + p·s + q.
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;

    let mut roots = if p == 0.0 && q == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else {
        let disc = (q / 2.0) * (q / 2.0) + (p / 3.0).powi(3);
        if disc > 0.0 {
            // One real root, one conjugate pair.
            let sd = disc.sqrt();
            let a = (-q / 2.0 + sd).cbrt();
            let b = (-q / 2.0 - sd).cbrt();
            let im = 3.0f64.sqrt() / 2.0 * (a - b);
            [
                Complex64::new(a + b, 0.0),
                Complex64::new(-(a + b) / 2.0, im),
                Complex64::new(-(a + b) / 2.0, -im),
            ]
        } else {
            // Three real roots: trigonometric form.
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            let mut out = [Complex64::new(0.0, 0.0); 3];
            for (k, slot) in out.iter_mut().enumerate() {
                let angle = theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                *slot = Complex64::new(m * angle.cos(), 0.0);
            }
            out
        }
    };

    for r in roots.iter_mut() {
        let lambda = *r - shift;
        // One Newton step on the original polynomial tightens Cardano's
        // round-off without risking a basin jump.
        let f = ((lambda + c2) * lambda + c1) * lambda + c0;
        let df = (3.0 * lambda + 2.0 * c2) * lambda + c1;
        *r = if df.norm() > 0.0 { lambda - f / df } else { lambda };
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Eigenvalues of the Lorenz Jacobian at a point, via the closed-form cubic.
pub fn jacobian_eigenvalues(p: &LorenzParams, point: &[f64; 3]) -> [Complex64; 3] {
    let j = lorenz_jacobian(p, point);
    let trace = j[0][0] + j[1][1] + j[2][2];
    // Sum of principal 2x2 minors.
    let minors = (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        + (j[0][0] * j[2][2] - j[0][2] * j[2][0])
        + (j[0][0] * j[1][1] - j[0][1] * j[1][0]);
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    cubic_roots(-trace, minors, -det)
}

/// Linear stability type read off the Jacobian eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    StableNode,
    UnstableNode,
    Saddle,
    StableFocus,
    UnstableFocus,
    SaddleFocus,
    Marginal,
}

/// A fixed point with its eigenvalues and stability classification.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub point: [f64; 3],
    pub eigenvalues: [Complex64; 3],
    pub class: StabilityClass,
}

const SPECTRAL_TOL: f64 = 1e-9;

/// Classifies a point of the Lorenz system by its Jacobian spectrum.
pub fn stability_report(p: &LorenzParams, point: [f64; 3]) -> StabilityReport {
    let eigenvalues = jacobian_eigenvalues(p, &point);
    let complex_pair = eigenvalues.iter().any(|l| l.im.abs() > SPECTRAL_TOL);
    let neg = eigenvalues.iter().filter(|l| l.re < -SPECTRAL_TOL).count();
    let pos = eigenvalues.iter().filter(|l| l.re > SPECTRAL_TOL).count();
    let class = if neg + pos < 3 {
        StabilityClass::Marginal
    } else if pos == 0 {
        if complex_pair { StabilityClass::StableFocus } else { StabilityClass::StableNode }
    } else if neg == 0 {
        if complex_pair { StabilityClass::UnstableFocus } else { StabilityClass::UnstableNode }
    } else if complex_pair {
        StabilityClass::SaddleFocus
    } else {
        StabilityClass::Saddle
    };
    StabilityReport { point, eigenvalues, class }
}

/// Classical Lorenz IVP dy/dτ = F(y) over τ ∈ [0, horizon].
pub fn lorenz_classical_ivp(
    p: &LorenzParams,
    ic: [f64; 3],
    horizon: f64,
) -> Result<ClassicalIvp> {
    ClassicalIvp::new(3, lorenz_rhs_fn(p), ic.to_vec(), (0.0, horizon))
}

/// Weighted Lorenz IVP D_ψ x = F(x) over t ∈ [0, horizon].
pub fn lorenz_conformable_ivp(
    p: &LorenzParams,
    weight: WeightSpec,
    ic: [f64; 3],
    horizon: f64,
) -> Result<ConformableIvp> {
    ConformableIvp::new(3, lorenz_rhs_fn(p), weight, ic.to_vec(), (0.0, horizon))
}

/// Caputo-fractional Lorenz IVP D^α x = F(x) on the uniform grid of step h.
pub fn lorenz_caputo_ivp(
    p: &LorenzParams,
    alpha: f64,
    ic: [f64; 3],
    horizon: f64,
    h: f64,
) -> Result<CaputoIvp> {
    CaputoIvp::new(3, lorenz_rhs_fn(p), alpha, ic.to_vec(), horizon, h)
}

/// The three formulations solved side by side, with deviation reports for
/// both alternatives against the pulled-back classical reference.
#[derive(Debug, Clone)]
pub struct ThreeWayRun {
    pub classical: Trajectory,
    pub conformable: Trajectory,
    pub caputo: Trajectory,
    pub conformable_vs_classical: EquivalenceReport,
    pub caputo_vs_classical: EquivalenceReport,
}

/// Solves the Lorenz system classically (in τ), directly in weighted time
/// (power-law weight of order `alpha`), and as a Caputo system, then compares
/// the latter two against the pulled-back classical trajectory.
///
/// The weighted route must agree with the classical one (reparametrization);
/// the Caputo route differs structurally for alpha < 1.
pub fn run_three_way(
    alpha: f64,
    p: &LorenzParams,
    ic: [f64; 3],
    horizon: f64,
    cfg: &SolverConfig,
    h_caputo: f64,
) -> Result<ThreeWayRun> {
    let weight = WeightSpec::power_law(alpha)?;
    let conf_ivp = lorenz_conformable_ivp(p, weight.clone(), ic, horizon)?;
    let classical = integrate_classical(&reparametrize(&conf_ivp)?, cfg)?;
    let conformable = integrate_conformable_direct(&conf_ivp, cfg)?;
    let caputo = integrate_caputo_abm(&lorenz_caputo_ivp(p, alpha, ic, horizon, h_caputo)?)?;

    let conformable_vs_classical =
        equivalence_report(&conformable, &classical, &weight, EQUIVALENCE_TOL)?;
    let caputo_vs_classical = equivalence_report(&caputo, &classical, &weight, EQUIVALENCE_TOL)?;

    Ok(ThreeWayRun { classical, conformable, caputo, conformable_vs_classical, caputo_vs_classical })
}
