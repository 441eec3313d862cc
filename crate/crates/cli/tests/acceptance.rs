//! Acceptance gate: twelve frozen criteria covering the operator identities,
//! the route equivalences, the memory-scheme separation, the Lorenz analysis,
//! the closed-form fields, and the CLI contract.
//!
//! Each test prints one `criterion NN PASS/FAIL` line with the measured
//! figures (visible with `cargo test --test acceptance -- --nocapture`) and
//! asserts against tolerances pinned here as literals.

use std::process::Command;
use std::sync::OnceLock;

use reparam_core::analytic::bessel_i0;
use reparam_core::verify::{self, CheckResult};

static WEIGHTS: OnceLock<Vec<CheckResult>> = OnceLock::new();
static CONFORMABLE: OnceLock<Vec<CheckResult>> = OnceLock::new();
static ANALYTIC: OnceLock<Vec<CheckResult>> = OnceLock::new();
static SOLVERS: OnceLock<Vec<CheckResult>> = OnceLock::new();
static SYSTEMS: OnceLock<Vec<CheckResult>> = OnceLock::new();

fn suite(cell: &'static OnceLock<Vec<CheckResult>>, name: &'static str) -> &'static [CheckResult] {
    cell.get_or_init(|| verify::run_suite(name).expect("built-in suite"))
}

fn check(cell: &'static OnceLock<Vec<CheckResult>>, suite_name: &'static str, name: &str) -> &'static CheckResult {
    suite(cell, suite_name)
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no check named {name} in {suite_name}"))
}

fn report(number: u8, passed: bool, detail: &str) {
    println!("criterion {number:02} {} — {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {number:02}: {detail}");
}

#[test]
fn criterion_01_weight_is_reciprocal_clock_rate() {
    // Three weight families, three orders, 1000 points on [0.01, 10]:
    // |psi(t)·phi'(t) − 1| within 1e-6.
    let c = check(&WEIGHTS, "weights", "reciprocal_identity");
    report(
        1,
        c.passed && c.max_dev <= 1e-6,
        &format!("reciprocal identity max deviation {:.3e} (bound 1e-6)", c.max_dev),
    );
}

#[test]
fn criterion_02_limit_form_equals_product_form() {
    let c = check(&CONFORMABLE, "conformable", "limit_vs_product");
    report(
        2,
        c.passed && c.max_dev <= 1e-6,
        &format!("limit vs product forms, worst relative {:.3e} (bound 1e-6)", c.max_dev),
    );
}

#[test]
fn criterion_03_leibniz_rule_holds() {
    let c = check(&CONFORMABLE, "conformable", "leibniz_rule");
    report(
        3,
        c.passed && c.max_dev <= 1e-8,
        &format!("Leibniz rule defect {:.3e} (bound 1e-8)", c.max_dev),
    );
}

#[test]
fn criterion_04_linear_closed_form_and_rk4_match() {
    let residual = check(&ANALYTIC, "analytic", "linear_ode_residual");
    let rk4 = check(&ANALYTIC, "analytic", "linear_ode_rk4_match");
    report(
        4,
        residual.passed && residual.max_dev <= 1e-6 && rk4.passed && rk4.max_dev <= 1e-6,
        &format!(
            "closed-form residual {:.3e}, RK4 relative error {:.3e} (bounds 1e-6)",
            residual.max_dev, rk4.max_dev
        ),
    );
}

#[test]
fn criterion_05_lorenz_routes_agree() {
    let c = check(&SYSTEMS, "systems", "lorenz_equivalence");
    report(
        5,
        c.passed && c.max_dev <= 1e-3,
        &format!(
            "direct weighted vs pulled-back classical Lorenz deviation {:.3e} (bound 1e-3)",
            c.max_dev
        ),
    );
}

#[test]
fn criterion_06_memory_scheme_separates() {
    let scalar = check(&SOLVERS, "solvers", "memory_scalar_separation");
    let lorenz = check(&SYSTEMS, "systems", "caputo_lorenz_separation");
    report(
        6,
        scalar.passed && scalar.max_dev >= 0.01 && lorenz.passed && lorenz.max_dev >= 0.1,
        &format!(
            "memory-vs-rescaled separation: scalar {:.3e} (floor 1e-2), Lorenz {:.3e} (floor 1e-1)",
            scalar.max_dev, lorenz.max_dev
        ),
    );
}

#[test]
fn criterion_07_memory_scheme_classical_limit() {
    let limit = check(&SOLVERS, "solvers", "caputo_classical_limit");
    let monotone = check(&SOLVERS, "solvers", "caputo_error_monotone");
    report(
        7,
        limit.passed && limit.max_dev <= 1e-3 && monotone.passed && monotone.max_dev <= 1.0,
        &format!(
            "order-1 scheme error {:.3e} at h=0.01 (bound 1e-3); halving-h error ratio {:.3}",
            limit.max_dev, monotone.max_dev
        ),
    );
}

#[test]
fn criterion_08_fixed_points_and_spectra() {
    let residuals = check(&SYSTEMS, "systems", "fixed_point_residuals");
    let spectrum = check(&SYSTEMS, "systems", "origin_spectrum");
    let invariance = check(&SYSTEMS, "systems", "jacobian_invariance");
    report(
        8,
        residuals.passed
            && residuals.max_dev <= 1e-12
            && spectrum.passed
            && spectrum.max_dev <= 1e-8
            && invariance.passed
            && invariance.max_dev <= 1e-12,
        &format!(
            "fixed-point residuals {:.3e} (1e-12), origin spectrum error {:.3e} (1e-8), \
             classical-vs-reparametrized Jacobian gap {:.3e} (1e-12, equal spectra follow)",
            residuals.max_dev, spectrum.max_dev, invariance.max_dev
        ),
    );
}

#[test]
fn criterion_09_heat_solution_satisfies_pde() {
    let residual = check(&ANALYTIC, "analytic", "heat_residual");
    let mass = check(&ANALYTIC, "analytic", "heat_kernel_mass");
    report(
        9,
        residual.passed && residual.max_dev <= 1e-4 && mass.passed && mass.max_dev <= 1e-10,
        &format!(
            "heat residual {:.3e} on the 20x20 grid (bound 1e-4), kernel mass defect {:.3e} (1e-10)",
            residual.max_dev, mass.max_dev
        ),
    );
}

#[test]
fn criterion_10_special_functions() {
    let gamma = check(&ANALYTIC, "analytic", "gamma_identities");
    let bessel = check(&ANALYTIC, "analytic", "bessel_branch_agreement");
    let i0_exact = bessel_i0(0.0) == 1.0;
    report(
        10,
        gamma.passed && gamma.max_dev <= 1e-10 && bessel.passed && bessel.max_dev <= 1e-9 && i0_exact,
        &format!(
            "gamma identities {:.3e} (1e-10); I0(0)=1 exact: {i0_exact}; branch agreement {:.3e} (1e-9)",
            gamma.max_dev, bessel.max_dev
        ),
    );
}

#[test]
fn criterion_11_rescaled_clock_lags() {
    let strict = check(&WEIGHTS, "weights", "slowdown_strict");
    let identity = check(&WEIGHTS, "weights", "slowdown_identity");
    report(
        11,
        strict.passed && strict.max_dev < 0.0 && identity.passed && identity.max_dev <= 1e-12,
        &format!(
            "max(phi(t) − t) = {:.3e} (< 0 required for alpha < 1, t > 1); identity gap {:.3e} at alpha = 1",
            strict.max_dev, identity.max_dev
        ),
    );
}

#[test]
fn criterion_12_cli_contract() {
    let verify_ok = Command::new(env!("CARGO_BIN_EXE_reparam"))
        .args(["verify", "--all"])
        .output()
        .expect("binary runs");
    let verify_exit = verify_ok.status.code();

    let dir = tempfile::tempdir().unwrap();
    let lorenz = Command::new(env!("CARGO_BIN_EXE_reparam"))
        .args([
            "lorenz", "--alpha", "0.9", "--mode", "all", "--horizon", "5",
            "--out", dir.path().to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    let lorenz_exit = lorenz.status.code();

    // Three parseable CSVs with the trajectory header.
    let mut csv_ok = true;
    for file in ["classical.csv", "conformable.csv", "caputo.csv"] {
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap_or_default();
        let mut lines = text.lines();
        csv_ok &= lines.next() == Some("t,tau,x,y,z");
        let mut rows = 0usize;
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            csv_ok &= cells.len() == 5 && cells.iter().all(|c| c.parse::<f64>().is_ok());
            rows += 1;
        }
        csv_ok &= rows > 1;
    }

    let report_json: serde_json::Value = std::fs::read_to_string(dir.path().join("equivalence.json"))
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default();
    let conformable_verdict = report_json["conformable_vs_classical"]["verdict"] == "pass";
    let caputo_verdict = report_json["caputo_vs_classical"]["verdict"] == "fail";

    report(
        12,
        verify_exit == Some(0)
            && lorenz_exit == Some(0)
            && csv_ok
            && conformable_verdict
            && caputo_verdict,
        &format!(
            "verify --all exit {verify_exit:?}; lorenz exit {lorenz_exit:?}; CSVs parseable: {csv_ok}; \
             conformable verdict pass: {conformable_verdict}; caputo verdict fail: {caputo_verdict}"
        ),
    );
}
