//! Built-in catalogs: derivative test functions, weighted IVPs, and PDE
//! initial profiles. Catalogs keep the CLI out of the expression-parsing
//! business while covering the cases the experiments need.

use std::sync::Arc;

use reparam_core::conformable::{RhsFn, ScalarFunction};
use reparam_core::weights::WeightSpec;
use reparam_core::Result;

use crate::{DerivFn, InitName, KindArg, OdeName};

pub fn weight_for(kind: KindArg, alpha: f64) -> Result<WeightSpec> {
    match kind {
        KindArg::Power => WeightSpec::power_law(alpha),
        KindArg::Exponential => WeightSpec::exponential(alpha),
        KindArg::Gamma => WeightSpec::gamma_scaled(alpha),
    }
}

/// Derivative-command catalog. `khalil_example` is x^a·sin(x^(1-a)) with
/// a = alpha, whose weighted derivative extends continuously to 0.
pub fn derivative_function(name: DerivFn, alpha: f64) -> ScalarFunction {
    match name {
        DerivFn::Sin => ScalarFunction::with_derivative(|t: f64| t.sin(), |t: f64| t.cos()),
        DerivFn::Exp => ScalarFunction::with_derivative(|t: f64| t.exp(), |t: f64| t.exp()),
        DerivFn::Poly3 => ScalarFunction::with_derivative(
            |t: f64| t.powi(3) - 2.0 * t + 1.0,
            |t: f64| 3.0 * t * t - 2.0,
        ),
        DerivFn::KhalilExample => {
            let a = alpha;
            ScalarFunction::with_derivative(
                move |t: f64| if t == 0.0 { 0.0 } else { t.powf(a) * t.powf(1.0 - a).sin() },
                move |t: f64| {
                    a * t.powf(a - 1.0) * t.powf(1.0 - a).sin()
                        + (1.0 - a) * t.powf(1.0 - a).cos()
                },
            )
        }
    }
}

/// Solve-command catalog: dimension, right-hand side, and initial state.
pub fn ode_problem(name: OdeName) -> (usize, RhsFn, Vec<f64>) {
    match name {
        OdeName::Decay => (1, Arc::new(|_t, y: &[f64], out: &mut [f64]| out[0] = -y[0]), vec![1.0]),
        OdeName::Growth => (1, Arc::new(|_t, y: &[f64], out: &mut [f64]| out[0] = y[0]), vec![1.0]),
        OdeName::Oscillator => (
            2,
            Arc::new(|_t, y: &[f64], out: &mut [f64]| {
                out[0] = y[1];
                out[1] = -y[0];
            }),
            vec![1.0, 0.0],
        ),
    }
}

/// PDE initial profiles.
pub fn initial_profile(name: InitName) -> impl Fn(f64) -> f64 + Send + Sync + Copy + 'static {
    move |x: f64| match name {
        InitName::Gaussian => (-x * x).exp(),
        InitName::Sine => x.sin(),
        InitName::Zero => 0.0,
        InitName::Box => {
            if x.abs() <= 1.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}
