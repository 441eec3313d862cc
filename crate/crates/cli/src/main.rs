//! `reparam`: run weighted-derivative experiments from the command line.
//!
//! Five subcommands cover the library surface: `derivative` tabulates the
//! limit and product forms of the operator, `solve` integrates a cataloged
//! weighted IVP along independent routes, `lorenz` produces the
//! classical/weighted/fractional trajectory data, `pde` evaluates the
//! closed-form fields, and `verify` runs the invariant suites.
//!
//! Exit codes: 0 success, 1 tolerance or solver failure, 2 configuration
//! error.

// Argument guards are written `!(x > 0.0)` rather than `x <= 0.0` so NaN
// input is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod catalog;
mod commands;
mod grid;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::GridSpec;

/// A command failure routed to the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid configuration (exit 2): bad flag values, unknown names.
    Config(String),
    /// Runtime failure (exit 1): solver breakdown, quadrature failure, I/O.
    Run(String),
    /// A measured deviation exceeded its tolerance (exit 1).
    Tolerance(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Run(_) | Failure::Tolerance(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Run(m) | Failure::Tolerance(m) => m,
        }
    }
}

impl From<reparam_core::Error> for Failure {
    fn from(e: reparam_core::Error) -> Self {
        match e {
            // Parameter validation is a configuration problem; everything
            // else is a runtime failure.
            reparam_core::Error::InvalidParameter(_) => Failure::Config(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(format!("i/o error: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "reparam",
    version,
    about = "Weighted first-order derivatives as time reparametrization",
    after_help = "The environment variable REPARAM_SEED is reserved for future stochastic \
                  features; no command currently uses randomness and the variable is ignored."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the weighted derivative in limit and product form over a grid
    Derivative(DerivativeArgs),
    /// Integrate a cataloged weighted IVP directly and via reparametrization
    Solve(SolveArgs),
    /// Run the Lorenz system classically, with a weighted derivative, and with Caputo memory
    Lorenz(LorenzArgs),
    /// Evaluate a closed-form PDE solution on a space-time grid
    Pde(PdeArgs),
    /// Run the named invariant suites and report PASS/FAIL per check
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    /// psi(t) = t^(1-alpha)
    Power,
    /// psi(t) = exp((alpha-1) t)
    Exponential,
    /// psi(t) = t^(1-alpha) / Gamma(alpha+1)
    Gamma,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DerivFn {
    Sin,
    Exp,
    Poly3,
    #[value(name = "khalil_example")]
    KhalilExample,
}

#[derive(Args)]
pub struct DerivativeArgs {
    /// Function from the built-in catalog
    #[arg(long = "fn", value_enum)]
    pub function: DerivFn,
    /// Derivative order in (0, 1]
    #[arg(long)]
    pub alpha: f64,
    /// Weight family
    #[arg(long, value_enum, default_value = "power")]
    pub kind: KindArg,
    /// Evaluation grid `start:end:count` or a single point; points must be > 0
    #[arg(long, default_value = "0.1:5:50", allow_hyphen_values = true, value_parser = grid::parse_grid)]
    pub t: GridSpec,
    /// Limit-vs-product agreement bound, relative to max(1, |product|)
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OdeName {
    /// D x = -x from x(0) = 1
    Decay,
    /// D x = x from x(0) = 1
    Growth,
    /// D x = v, D v = -x from (1, 0)
    Oscillator,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RouteArg {
    Direct,
    Classical,
    Both,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Problem from the built-in catalog
    #[arg(long, value_enum)]
    pub ode: OdeName,
    /// Derivative order in (0, 1]
    #[arg(long)]
    pub alpha: f64,
    /// Weight family
    #[arg(long, value_enum, default_value = "power")]
    pub kind: KindArg,
    /// Integration span `start:end` in the original clock
    #[arg(long, default_value = "0:2", allow_hyphen_values = true, value_parser = grid::parse_span)]
    pub span: (f64, f64),
    /// Which routes to run; `both` also writes an equivalence report
    #[arg(long, value_enum, default_value = "both")]
    pub route: RouteArg,
    /// Deviation bound for the `both` equivalence report
    #[arg(long, default_value_t = 1e-8)]
    pub eq_tol: f64,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: std::path::PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LorenzMode {
    Classical,
    Conformable,
    Caputo,
    All,
}

#[derive(Args)]
pub struct LorenzArgs {
    /// Derivative order in (0, 1] (the classical run ignores it)
    #[arg(long, default_value_t = 0.9)]
    pub alpha: f64,
    /// Which formulation(s) to integrate
    #[arg(long, value_enum, default_value = "all")]
    pub mode: LorenzMode,
    /// Final time in the original clock
    #[arg(long, default_value_t = 5.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 10.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 28.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 8.0 / 3.0)]
    pub beta: f64,
    /// Initial condition `x,y,z`
    #[arg(long, default_value = "1,1,1", allow_hyphen_values = true, value_parser = grid::parse_triple)]
    pub ic: [f64; 3],
    /// Adaptive solver tolerance (absolute and relative)
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Start offset for the weighted solve when the weight is singular at 0
    #[arg(long, default_value_t = 1e-2)]
    pub offset: f64,
    /// Memory-scheme step size
    #[arg(long, default_value_t = 1e-3)]
    pub h_caputo: f64,
    /// Output directory for CSV and JSON files
    #[arg(long, default_value = ".")]
    pub out: std::path::PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum PdeName {
    Heat,
    Burgers,
    Wave,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum InitName {
    /// exp(-x^2)
    Gaussian,
    /// sin(x)
    Sine,
    /// 0
    Zero,
    /// 1 on [-1, 1], 0 elsewhere
    Box,
}

#[derive(Args)]
pub struct PdeArgs {
    /// Which equation to evaluate
    #[arg(value_enum)]
    pub problem: PdeName,
    /// Derivative order in (0, 1] (power-law weight)
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Initial profile from the built-in catalog
    #[arg(long, value_enum)]
    pub init: InitName,
    /// Diffusivity (heat) or viscosity (burgers)
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Damping coefficient (wave)
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Wave speed (wave)
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Spatial grid `start:end:count` or a single point
    #[arg(long, default_value = "-2:2:41", allow_hyphen_values = true, value_parser = grid::parse_grid)]
    pub x: GridSpec,
    /// Time grid `start:end:count` or a single value
    #[arg(long, default_value = "0.5:2:4", allow_hyphen_values = true, value_parser = grid::parse_grid)]
    pub t: GridSpec,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Run the consistency checks for this problem instead of emitting a grid
    #[arg(long, default_value_t = false)]
    pub verify: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct SuiteSelect {
    /// Run every suite
    #[arg(long)]
    pub all: bool,
    /// Run one named suite
    #[arg(long)]
    pub suite: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub select: SuiteSelect,
    /// Also write the results as JSON to this path
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derivative(args) => commands::run_derivative(&args),
        Command::Solve(args) => commands::run_solve(&args),
        Command::Lorenz(args) => commands::run_lorenz(&args),
        Command::Pde(args) => commands::run_pde(&args),
        Command::Verify(args) => commands::run_verify(&args),
    };
    match result {
        Ok(()) => {}
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.exit_code());
        }
    }
}
