//! Closed-form solutions of the weighted-derivative model equations.
//!
//! Every formula here is the classical solution evaluated at the rescaled
//! time τ = φ_α(t): a linear second-order ODE with exponential branches, the
//! heat kernel convolution, the Cole–Hopf form of Burgers' equation, and the
//! damped wave solution with its Bessel relaxation kernel. These serve as
//! oracles for the numerical solvers.

use std::sync::Arc;

use crate::analytic::special::bessel_i0;
use crate::error::{Error, Result};
use crate::numerics;
use crate::weights::{RealFn, WeightSpec};

// Quadrature tolerances. The PDE residual checks take second differences of
// these values, which amplifies quadrature error by 4/h^2; the tight settings
// keep that noise far below the residual bounds.
const HEAT_REL_TOL: f64 = 1e-10;
const BURGERS_REL_TOL: f64 = 1e-10;
const WAVE_REL_TOL: f64 = 1e-12;

// Gaussian-kernel integrals are truncated at |y - x| = 12·sqrt(nu·tau); the
// omitted tail mass is erfc(6) < 1e-16 of the total.
const KERNEL_HALF_WIDTH: f64 = 12.0;

// Absolute quadrature floor: samples estimate the integrand scale so that
// integrals which vanish by symmetry still converge. 33 points keep the probe
// from missing kernel mass concentrated between coarse samples.
fn abs_floor(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let scale = (0..=32)
        .map(|i| g(a + (b - a) * i as f64 / 32.0).abs())
        .fold(0.0, f64::max);
    1e-15 * (b - a) * scale + 1e-300
}

/// Solution of the weighted linear equation whose operator square satisfies
/// D²y − 3Dy + 2y = 0 under the iterated power-law derivative:
/// y(t) = C₁·e^{t^α/α} + C₂·e^{2·t^α/α}.
pub fn linear_example_solution(c1: f64, c2: f64, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("solution defined for t >= 0, got {t}")));
    }
    let u = t.powf(alpha) / alpha;
    Ok(c1 * u.exp() + c2 * (2.0 * u).exp())
}

/// Heat flow under a weighted time derivative: D^α_t u = ν·∂ₓ²u with initial
/// profile u(x, 0) = f(x).
#[derive(Clone)]
pub struct HeatProblem {
    f: RealFn,
    nu: f64,
    weight: WeightSpec,
}

impl HeatProblem {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        nu: f64,
        weight: WeightSpec,
    ) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::InvalidParameter(format!("diffusivity must be positive, got {nu}")));
        }
        Ok(Self { f: Arc::new(f), nu, weight })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn initial(&self, y: f64) -> f64 {
        (self.f)(y)
    }
}

/// Evaluates the heat solution u(x, t) = (4πντ)^{-1/2} ∫ f(y)·
/// exp(−(x−y)²/(4ντ)) dy at τ = φ(t): the classical heat solution on the
/// rescaled clock.
pub fn heat_solution(p: &HeatProblem, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("heat solution needs t > 0, got {t}")));
    }
    let tau = p.weight.phi(t)?;
    let denom = 4.0 * p.nu * tau;
    let half = KERNEL_HALF_WIDTH * (p.nu * tau).sqrt();
    let f = Arc::clone(&p.f);
    let g = move |y: f64| f(y) * (-(x - y) * (x - y) / denom).exp();
    let (a, b) = (x - half, x + half);
    let integral = numerics::integrate(&g, a, b, HEAT_REL_TOL, abs_floor(&g, a, b))?;
    Ok(integral / (std::f64::consts::PI * denom).sqrt())
}

/// Integrates the bare heat kernel over the truncated window; equals 1 up to
/// the discarded tail and quadrature error. A deviation from 1 flags a
/// quadrature problem before it can contaminate solution values.
pub fn heat_kernel_mass(p: &HeatProblem, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel mass needs t > 0, got {t}")));
    }
    let tau = p.weight.phi(t)?;
    let denom = 4.0 * p.nu * tau;
    let half = KERNEL_HALF_WIDTH * (p.nu * tau).sqrt();
    let g = move |y: f64| (-(x - y) * (x - y) / denom).exp();
    let integral = numerics::integrate(&g, x - half, x + half, 1e-12, 1e-300)?;
    Ok(integral / (std::f64::consts::PI * denom).sqrt())
}

/// Burgers' equation under a weighted time derivative (power-law weight),
/// solved by the Cole–Hopf transformation with the cumulative initial profile
/// F(y) = ∫₀^y f provided in closed form.
///
/// Computes θ(x, τ) = ∫ exp(−F(y)/(2ν) − (x−y)²/(4ντ)) dy and its exact
/// x-derivative (differentiation under the integral sign, avoiding the
/// cancellation a finite difference of −2ν·∂ₓθ/θ would suffer), then returns
/// u = −2ν·∂ₓθ/θ at τ = t^α/α.
pub fn burgers_solution_from_cumulative(
    cumulative: impl Fn(f64) -> f64,
    nu: f64,
    alpha: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::InvalidParameter(format!("viscosity must be positive, got {nu}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("Burgers solution needs t > 0, got {t}")));
    }
    let weight = WeightSpec::power_law(alpha)?;
    let tau = weight.phi(t)?;
    let denom = 4.0 * nu * tau;

    let kernel = |y: f64| (-cumulative(y) / (2.0 * nu) - (x - y) * (x - y) / denom).exp();
    // Widen the window until the integrand is negligible at both ends; the
    // cumulative term can shift the effective Gaussian center.
    let mut half = KERNEL_HALF_WIDTH * (nu * tau).sqrt();
    let center = kernel(x).max(f64::MIN_POSITIVE);
    for _ in 0..24 {
        if kernel(x - half) <= 1e-16 * center && kernel(x + half) <= 1e-16 * center {
            break;
        }
        half *= 2.0;
    }

    let (a, b) = (x - half, x + half);
    let theta = numerics::integrate(&kernel, a, b, BURGERS_REL_TOL, abs_floor(&kernel, a, b))?;
    if !(theta > 0.0) {
        return Err(Error::QuadratureNoConvergence(format!(
            "Cole-Hopf potential came out non-positive ({theta}) at x={x}, t={t}"
        )));
    }
    let dkernel = |y: f64| kernel(y) * (y - x) / (2.0 * nu * tau);
    let theta_x = numerics::integrate(&dkernel, a, b, BURGERS_REL_TOL, abs_floor(&dkernel, a, b))?;
    Ok(-2.0 * nu * theta_x / theta)
}

/// [`burgers_solution_from_cumulative`] with F(y) = ∫₀^y f computed by
/// quadrature from the profile itself.
pub fn burgers_solution(
    f: impl Fn(f64) -> f64,
    nu: f64,
    alpha: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    let failed = std::cell::Cell::new(false);
    let cumulative = |y: f64| match numerics::integrate(&f, 0.0, y, 1e-12, 1e-15) {
        Ok(v) => v,
        Err(_) => {
            failed.set(true);
            f64::NAN
        }
    };
    let result = burgers_solution_from_cumulative(cumulative, nu, alpha, x, t);
    if failed.get() {
        return Err(Error::QuadratureNoConvergence(
            "cumulative initial profile did not converge".into(),
        ));
    }
    result
}

/// Damped wave motion under a weighted time derivative:
/// second-order evolution u_ττ + β·u_τ = c²·u_xx on the rescaled clock, with
/// u(x,0) = f(x) and u_τ(x,0) = g(x).
#[derive(Clone)]
pub struct DampedWaveProblem {
    f: RealFn,
    g: RealFn,
    beta: f64,
    c: f64,
    weight: WeightSpec,
}

impl DampedWaveProblem {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        beta: f64,
        c: f64,
        alpha: f64,
    ) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!("damping must be positive, got {beta}")));
        }
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wave speed must be positive, got {c}"
            )));
        }
        Ok(Self {
            f: Arc::new(f),
            g: Arc::new(g),
            beta,
            c,
            weight: WeightSpec::power_law(alpha)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }
}

/// Evaluates the damped-wave solution
///
/// ```text
/// u = e^{−βφ/2}·(f(x+cφ) + f(x−cφ))/2
///   + e^{−βφ/2}/(2c)·∫_{x−cφ}^{x+cφ} ((β/2)f(y) + g(y))·I₀((β/2)·√(φ² − (y−x)²/c²)) dy
/// ```
///
/// at φ = φ_α(t). The formula is exact at β = 0 (d'Alembert) and carries an
/// O(β²) defect otherwise, which the residual tests budget for.
pub fn damped_wave_solution(p: &DampedWaveProblem, x: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("wave solution needs t >= 0, got {t}")));
    }
    let phi = p.weight.phi(t)?;
    if phi == 0.0 {
        return Ok((p.f)(x));
    }
    let damp = (-p.beta * phi / 2.0).exp();
    let average = 0.5 * ((p.f)(x + p.c * phi) + (p.f)(x - p.c * phi));

    let (f, g, beta, c) = (Arc::clone(&p.f), Arc::clone(&p.g), p.beta, p.c);
    let integrand = move |y: f64| {
        // The radicand is non-negative on [x - c·phi, x + c·phi]; clamp the
        // round-off negative at the endpoints.
        let radicand = (phi * phi - (y - x) * (y - x) / (c * c)).max(0.0);
        (beta / 2.0 * f(y) + g(y)) * bessel_i0(beta / 2.0 * radicand.sqrt())
    };
    let (a, b) = (x - p.c * phi, x + p.c * phi);
    let integral = numerics::integrate(&integrand, a, b, WAVE_REL_TOL, abs_floor(&integrand, a, b))?;
    Ok(damp * (average + integral / (2.0 * p.c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformable::{conf_derivative_product, ScalarFunction};

    #[test]
    fn linear_example_reference_values() {
        assert_eq!(linear_example_solution(2.0, 3.0, 0.7, 0.0).unwrap(), 5.0);

        let e = linear_example_solution(1.0, 0.0, 1.0, 1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);

        // C1 = C2 = 1, alpha = 0.5, t = 1: e^2 + e^4; 30-digit arithmetic.
        let v = linear_example_solution(1.0, 1.0, 0.5, 1.0).unwrap();
        let want = 61.987206132074889;
        assert!((v - want).abs() < 1e-13 * want, "got {v}");

        assert!(linear_example_solution(1.0, 1.0, 1.5, 1.0).is_err());
        assert!(linear_example_solution(1.0, 1.0, 0.5, -0.1).is_err());
    }

    #[test]
    fn linear_example_satisfies_its_equation() {
        // Apply the product-form weighted derivative twice with analytic
        // inner derivatives and check D²y − 3·Dy + 2y = 0.
        for &alpha in &[0.5, 0.9] {
            let (c1, c2) = (1.3, -0.4);
            let y = ScalarFunction::with_derivative(
                move |t: f64| {
                    let u = t.powf(alpha) / alpha;
                    c1 * u.exp() + c2 * (2.0 * u).exp()
                },
                move |t: f64| {
                    let u = t.powf(alpha) / alpha;
                    (c1 * u.exp() + 2.0 * c2 * (2.0 * u).exp()) * t.powf(alpha - 1.0)
                },
            );
            // Dy = C1 e^u + 2 C2 e^{2u}, with its own analytic derivative.
            let dy = ScalarFunction::with_derivative(
                move |t: f64| {
                    let u = t.powf(alpha) / alpha;
                    c1 * u.exp() + 2.0 * c2 * (2.0 * u).exp()
                },
                move |t: f64| {
                    let u = t.powf(alpha) / alpha;
                    (c1 * u.exp() + 4.0 * c2 * (2.0 * u).exp()) * t.powf(alpha - 1.0)
                },
            );
            let w = WeightSpec::power_law(alpha).unwrap();
            for i in 0..15 {
                let t = 0.2 + i as f64 * (3.0 - 0.2) / 14.0;
                let d1 = conf_derivative_product(&y, &w, t).unwrap();
                let d2 = conf_derivative_product(&dy, &w, t).unwrap();
                let residual = d2 - 3.0 * d1 + 2.0 * linear_example_solution(c1, c2, alpha, t).unwrap();
                assert!(residual.abs() <= 1e-6, "alpha={alpha}, t={t}: residual {residual}");
            }
        }
    }

    #[test]
    fn heat_preserves_constant_data() {
        for &alpha in &[0.5, 1.0] {
            let p = HeatProblem::new(|_| 1.0, 1.0, WeightSpec::power_law(alpha).unwrap()).unwrap();
            for &(x, t) in &[(0.0, 0.5), (-1.7, 1.0), (2.3, 2.0)] {
                let u = heat_solution(&p, x, t).unwrap();
                assert!((u - 1.0).abs() <= 1e-10, "u({x},{t}) = {u}");
            }
        }
    }

    #[test]
    fn heat_gaussian_matches_convolution_closed_form() {
        // f = e^{-y^2}, nu = 1, alpha = 1: u = e^{-x^2/(1+4t)}/sqrt(1+4t).
        let p = HeatProblem::new(|y: f64| (-y * y).exp(), 1.0, WeightSpec::power_law(1.0).unwrap())
            .unwrap();
        for &(x, t) in &[(0.0, 0.25), (0.8, 1.0), (-1.5, 2.0)] {
            let u = heat_solution(&p, x, t).unwrap();
            let want = (-x * x / (1.0 + 4.0 * t)).exp() / (1.0 + 4.0 * t).sqrt();
            assert!(
                ((u - want) / want).abs() <= 1e-8,
                "u({x},{t}) = {u}, closed form {want}"
            );
        }
    }

    #[test]
    fn heat_alpha_half_is_classical_at_rescaled_time() {
        let f = |y: f64| (-y * y).exp();
        let half = HeatProblem::new(f, 1.0, WeightSpec::power_law(0.5).unwrap()).unwrap();
        let one = HeatProblem::new(f, 1.0, WeightSpec::power_law(1.0).unwrap()).unwrap();
        for &(x, t) in &[(0.3, 0.5), (1.1, 1.0), (-0.6, 2.25)] {
            let u_half = heat_solution(&half, x, t).unwrap();
            let u_one = heat_solution(&one, x, 2.0 * t.sqrt()).unwrap();
            assert!(
                (u_half - u_one).abs() <= 1e-10,
                "alpha=0.5 at {t} vs alpha=1 at {}: {u_half} vs {u_one}",
                2.0 * t.sqrt()
            );
        }
    }

    #[test]
    fn heat_kernel_mass_is_unity() {
        let p = HeatProblem::new(|_| 1.0, 0.7, WeightSpec::power_law(0.5).unwrap()).unwrap();
        for &(x, t) in &[(0.0, 0.5), (2.0, 1.3), (-3.5, 2.0)] {
            let mass = heat_kernel_mass(&p, x, t).unwrap();
            assert!((mass - 1.0).abs() <= 1e-10, "mass({x},{t}) = {mass}");
        }
    }

    #[test]
    fn heat_conformable_residual_small() {
        // D^alpha_t u - u_xx with the time derivative taken as psi(t) times a
        // central difference; Gaussian data, power-law weight.
        let alpha = 0.5;
        let w = WeightSpec::power_law(alpha).unwrap();
        let p = HeatProblem::new(|y: f64| (-y * y).exp(), 1.0, w.clone()).unwrap();
        let h = 1e-3;
        for i in 0..5 {
            for j in 0..5 {
                let x = -2.0 + 4.0 * i as f64 / 4.0;
                let t = 0.5 + 1.5 * j as f64 / 4.0;
                let ut = (heat_solution(&p, x, t + h).unwrap()
                    - heat_solution(&p, x, t - h).unwrap())
                    / (2.0 * h);
                let uxx = (heat_solution(&p, x + h, t).unwrap()
                    - 2.0 * heat_solution(&p, x, t).unwrap()
                    + heat_solution(&p, x - h, t).unwrap())
                    / (h * h);
                let residual = w.psi(t).unwrap() * ut - uxx;
                assert!(residual.abs() <= 1e-4, "residual at ({x},{t}): {residual}");
            }
        }
    }

    #[test]
    fn burgers_zero_profile_stays_zero() {
        for &(x, t) in &[(0.0, 0.5), (1.2, 1.0), (-2.0, 2.0)] {
            let u = burgers_solution(|_| 0.0, 1.0, 0.5, x, t).unwrap();
            assert!(u.abs() <= 1e-10, "u({x},{t}) = {u}");
        }
    }

    #[test]
    fn burgers_linearizes_to_heat_for_small_amplitude() {
        // Amplitude 1e-3 sine at nu = 1: the nonlinear term is O(amplitude^2),
        // so the heat solution matches within 5% of the signal scale.
        let amp = 1e-3;
        let heat = HeatProblem::new(
            move |y: f64| amp * y.sin(),
            1.0,
            WeightSpec::power_law(1.0).unwrap(),
        )
        .unwrap();
        let scale = amp * (-1.0f64).exp(); // heat damping of sin at t = 1
        for &x in &[0.5, 1.0, 1.5] {
            let u_b =
                burgers_solution_from_cumulative(move |y: f64| amp * (1.0 - y.cos()), 1.0, 1.0, x, 1.0)
                    .unwrap();
            let u_h = heat_solution(&heat, x, 1.0).unwrap();
            assert!(
                (u_b - u_h).abs() <= 0.05 * scale,
                "x={x}: burgers {u_b} vs heat {u_h} (scale {scale})"
            );
        }
    }

    #[test]
    fn burgers_weighted_equals_classical_at_rescaled_time() {
        // tau = phi_{1/2}(1) = 2 exactly, so the alpha = 1/2 solution at t = 1
        // must reproduce the classical solution at t = 2 bit-for-bit modulo
        // the shared quadrature path.
        let cum = |y: f64| 0.3 * (1.0 - y.cos());
        for &x in &[0.0, 0.9, -1.4] {
            let weighted = burgers_solution_from_cumulative(cum, 0.8, 0.5, x, 1.0).unwrap();
            let classical = burgers_solution_from_cumulative(cum, 0.8, 1.0, x, 2.0).unwrap();
            assert!(
                (weighted - classical).abs() <= 1e-12 * classical.abs().max(1.0),
                "x={x}: {weighted} vs {classical}"
            );
        }
    }

    #[test]
    fn wave_initial_time_returns_profile() {
        let p = DampedWaveProblem::new(|x: f64| (-x * x).exp(), |_| 0.0, 0.5, 2.0, 0.7).unwrap();
        let u = damped_wave_solution(&p, 0.4, 0.0).unwrap();
        assert_eq!(u, (-0.4f64 * 0.4).exp());
    }

    #[test]
    fn wave_small_damping_approaches_dalembert() {
        let f = |x: f64| (-x * x).exp();
        let p = DampedWaveProblem::new(f, |_| 0.0, 1e-10, 1.0, 0.5).unwrap();
        let (x, t) = (0.3, 1.0);
        let phi = p.weight().phi(t).unwrap();
        let dal = 0.5 * (f(x + phi) + f(x - phi));
        let u = damped_wave_solution(&p, x, t).unwrap();
        assert!((u - dal).abs() <= 1e-8, "u = {u}, d'Alembert {dal}");
    }

    #[test]
    fn wave_classical_residual_within_budget() {
        // alpha = 1, small beta: u_tt + beta·u_t - c^2·u_xx by central
        // differences. The solution formula carries an O(beta^2) defect, so at
        // beta = 0.02 the residual sits well inside 1e-3.
        let beta = 0.02;
        let p = DampedWaveProblem::new(|x: f64| (-x * x).exp(), |_| 0.0, beta, 1.0, 1.0).unwrap();
        let h = 1e-3;
        let u = |x: f64, t: f64| damped_wave_solution(&p, x, t).unwrap();
        for &(x, t) in &[(-0.5, 0.5), (0.0, 1.0), (0.7, 0.8)] {
            let utt = (u(x, t + h) - 2.0 * u(x, t) + u(x, t - h)) / (h * h);
            let ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
            let uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
            let residual = utt + beta * ut - uxx;
            assert!(residual.abs() <= 1e-3, "residual at ({x},{t}): {residual}");
        }
    }

    #[test]
    fn problem_constructors_validate() {
        assert!(HeatProblem::new(|_| 1.0, 0.0, WeightSpec::power_law(0.5).unwrap()).is_err());
        assert!(DampedWaveProblem::new(|_| 0.0, |_| 0.0, 0.0, 1.0, 0.5).is_err());
        assert!(DampedWaveProblem::new(|_| 0.0, |_| 0.0, 0.5, -1.0, 0.5).is_err());
        assert!(DampedWaveProblem::new(|_| 0.0, |_| 0.0, 0.5, 1.0, 1.5).is_err());
        assert!(burgers_solution(|_| 0.0, -1.0, 0.5, 0.0, 1.0).is_err());
        assert!(burgers_solution(|_| 0.0, 1.0, 0.5, 0.0, 0.0).is_err());
        assert!(heat_solution(
            &HeatProblem::new(|_| 1.0, 1.0, WeightSpec::power_law(0.5).unwrap()).unwrap(),
            0.0,
            0.0
        )
        .is_err());
    }
}
