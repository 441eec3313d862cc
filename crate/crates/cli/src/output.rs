//! CSV and JSON emitters. Floats are printed with 17 significant digits so
//! that parsing an emitted file reproduces the in-memory values exactly.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use reparam_core::solvers::{EquivalenceReport, Trajectory};
use reparam_core::weights::WeightSpec;

use crate::Failure;

/// 17-significant-digit decimal form: lossless for f64.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a trajectory as `t,tau,<components>` rows. The `tau` column is
/// phi(t) when a weight is given (weighted and memory runs) and t itself for
/// classical runs, whose clock already is tau.
pub fn write_trajectory_csv(
    out: &mut dyn Write,
    traj: &Trajectory,
    weight: Option<&WeightSpec>,
) -> std::result::Result<(), Failure> {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    let dim = traj.dimension();
    if dim > NAMES.len() {
        return Err(Failure::Run(format!("cannot label a {dim}-dimensional trajectory")));
    }
    writeln!(out, "t,tau,{}", NAMES[..dim].join(","))?;
    for (i, &t) in traj.times().iter().enumerate() {
        let tau = match weight {
            Some(w) => w.phi(t)?,
            None => t,
        };
        let state: Vec<String> = traj.state(i).iter().map(|&v| fmt(v)).collect();
        writeln!(out, "{},{},{}", fmt(t), fmt(tau), state.join(","))?;
    }
    Ok(())
}

pub fn write_trajectory_file(
    path: &Path,
    traj: &Trajectory,
    weight: Option<&WeightSpec>,
) -> std::result::Result<(), Failure> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_trajectory_csv(&mut file, traj, weight)?;
    file.flush()?;
    Ok(())
}

/// One field sample per row: `x,t,u`.
pub fn write_field_csv(
    out: &mut dyn Write,
    rows: &[(f64, f64, f64)],
) -> std::result::Result<(), Failure> {
    writeln!(out, "x,t,u")?;
    for &(x, t, u) in rows {
        writeln!(out, "{},{},{}", fmt(x), fmt(t), fmt(u))?;
    }
    Ok(())
}

/// JSON form of one trajectory comparison.
#[derive(Serialize)]
pub struct ComparisonJson {
    /// Worst deviation per state component.
    pub max_dev: Vec<f64>,
    /// Time (original clock) at which the overall worst deviation occurs.
    pub t_at_max: f64,
    pub tolerance: f64,
    pub verdict: &'static str,
}

impl ComparisonJson {
    pub fn from_report(r: &EquivalenceReport) -> Self {
        ComparisonJson {
            max_dev: r.per_component.clone(),
            t_at_max: r.time_of_max,
            tolerance: r.tolerance,
            verdict: if r.passed { "pass" } else { "fail" },
        }
    }
}

/// JSON form of one verify check.
#[derive(Serialize)]
pub struct CheckJson {
    pub suite: &'static str,
    pub name: &'static str,
    pub max_dev: f64,
    pub tolerance: f64,
    pub verdict: &'static str,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Run(format!("could not serialize report: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Keeps JSON numeric: serde_json renders non-finite floats as null, which
/// would break downstream parsers, so an errored check's infinite deviation
/// is clamped to f64::MAX.
pub fn finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::MAX
    }
}
