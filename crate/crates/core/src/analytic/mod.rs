//! Closed-form oracles: special functions (Γ, modified Bessel I₀) and exact
//! solutions of the weighted-derivative model equations (linear ODE, heat,
//! Burgers, damped wave).

mod closed_form;
mod special;

pub use closed_form::{
    burgers_solution, burgers_solution_from_cumulative, damped_wave_solution, heat_kernel_mass,
    heat_solution, linear_example_solution, DampedWaveProblem, HeatProblem,
};
pub use special::{bessel_i0, gamma_function};
pub(crate) use special::{bessel_i0_asymptotic, bessel_i0_series};
