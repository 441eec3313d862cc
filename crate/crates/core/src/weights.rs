//! Weight functions ψ_α, their time maps φ_α(t) = ∫₀ᵗ ds/ψ_α(s), and the
//! inverse maps φ_α⁻¹.
//!
//! A weight function rescales the classical derivative: D_ψ f(t) = ψ_α(t)·f′(t).
//! Its time map φ_α converts that operator into a plain d/dτ — dynamics driven
//! by D_ψ in t are classical dynamics in τ = φ_α(t). Three families are built
//! in with closed-form maps; arbitrary user weights fall back to quadrature
//! and root finding.
//!
//! # Example
//! ```
//! use reparam_core::weights::WeightSpec;
//! let w = WeightSpec::power_law(0.5).unwrap();
//! assert!((w.psi(4.0).unwrap() - 2.0).abs() < 1e-15);      // 4^{1-0.5}
//! assert!((w.phi(4.0).unwrap() - 4.0).abs() < 1e-15);      // 4^{0.5}/0.5
//! assert!((w.phi_inverse(4.0).unwrap() - 4.0).abs() < 1e-12);
//! ```

use std::sync::Arc;

use crate::analytic::gamma_function;
use crate::error::{Error, Result};
use crate::numerics;

/// Shared real-valued function of one real variable.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The weight family. All built-in kinds have closed-form ψ, φ, and φ⁻¹.
#[derive(Clone)]
pub enum WeightKind {
    /// ψ_α(t) = t^{1−α}
    PowerLaw,
    /// ψ_α(t) = e^{(α−1)t}
    Exponential,
    /// ψ_α(t) = t^{1−α}/Γ(α+1)
    GammaScaled,
    /// User-supplied ψ with an optional closed-form φ. Without `phi`, the
    /// time map is computed by singularity-tolerant quadrature and its
    /// inverse by bracketed root finding.
    Custom { psi: RealFn, phi: Option<RealFn> },
}

impl std::fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightKind::PowerLaw => "PowerLaw",
            WeightKind::Exponential => "Exponential",
            WeightKind::GammaScaled => "GammaScaled",
            WeightKind::Custom { .. } => "Custom",
        })
    }
}

/// An immutable weight selection: a [`WeightKind`] plus the order α ∈ (0, 1].
///
/// Safe to clone cheaply and share across threads; all evaluation methods are
/// pure.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    kind: WeightKind,
    alpha: f64,
}

/// Relative tolerance for the quadrature that evaluates a `Custom` time map.
const CUSTOM_PHI_REL_TOL: f64 = 1e-10;

impl WeightSpec {
    /// Builds a spec, rejecting α outside (0, 1].
    pub fn new(kind: WeightKind, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self { kind, alpha })
    }

    /// ψ_α(t) = t^{1−α}.
    pub fn power_law(alpha: f64) -> Result<Self> {
        Self::new(WeightKind::PowerLaw, alpha)
    }

    /// ψ_α(t) = e^{(α−1)t}.
    pub fn exponential(alpha: f64) -> Result<Self> {
        Self::new(WeightKind::Exponential, alpha)
    }

    /// ψ_α(t) = t^{1−α}/Γ(α+1).
    pub fn gamma_scaled(alpha: f64) -> Result<Self> {
        Self::new(WeightKind::GammaScaled, alpha)
    }

    /// User-supplied weight; `phi` may supply a closed-form time map.
    pub fn custom(alpha: f64, psi: RealFn, phi: Option<RealFn>) -> Result<Self> {
        Self::new(WeightKind::Custom { psi, phi }, alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Short human-readable tag for trajectory metadata.
    pub fn summary(&self) -> String {
        format!("{:?}(alpha={})", self.kind, self.alpha)
    }

    /// Evaluates the weight ψ_α(t).
    ///
    /// Errors for t < 0 on every kind, and for t = 0 on the kinds that are
    /// singular there (PowerLaw and GammaScaled with α < 1, where ψ vanishes
    /// or diverges).
    pub fn psi(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        match &self.kind {
            WeightKind::PowerLaw | WeightKind::GammaScaled => {
                if t < 0.0 || (t == 0.0 && a < 1.0) || t.is_nan() {
                    return Err(Error::Domain(format!(
                        "psi({t}) undefined for a power-type weight with alpha = {a}"
                    )));
                }
                let base = t.powf(1.0 - a);
                match self.kind {
                    WeightKind::PowerLaw => Ok(base),
                    _ => Ok(base / gamma_function(a + 1.0)?),
                }
            }
            WeightKind::Exponential => {
                if !(t >= 0.0) {
                    return Err(Error::Domain(format!("psi requires t >= 0, got {t}")));
                }
                Ok(((a - 1.0) * t).exp())
            }
            WeightKind::Custom { psi, .. } => {
                if !(t >= 0.0) {
                    return Err(Error::Domain(format!("psi requires t >= 0, got {t}")));
                }
                let v = psi(t);
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::Domain(format!(
                        "custom weight returned non-positive or non-finite value {v} at t = {t}"
                    )));
                }
                Ok(v)
            }
        }
    }

    /// Evaluates the time map φ_α(t) = ∫₀ᵗ ds/ψ_α(s).
    ///
    /// φ(0) = 0 is returned without touching ψ. Built-in kinds use their
    /// closed forms; `Custom` integrates 1/ψ with an endpoint-singularity-
    /// tolerant rule at relative tolerance 1e-10 unless a closed-form map was
    /// supplied.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("phi requires t >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let a = self.alpha;
        match &self.kind {
            WeightKind::PowerLaw => Ok(t.powf(a) / a),
            WeightKind::Exponential => {
                if a == 1.0 {
                    Ok(t)
                } else {
                    Ok(((1.0 - a) * t).exp_m1() / (1.0 - a))
                }
            }
            WeightKind::GammaScaled => Ok(gamma_function(a + 1.0)? * t.powf(a) / a),
            WeightKind::Custom { psi, phi } => {
                if let Some(phi) = phi {
                    let v = phi(t);
                    if !v.is_finite() {
                        return Err(Error::Domain(format!(
                            "custom time map returned non-finite value at t = {t}"
                        )));
                    }
                    return Ok(v);
                }
                let psi = Arc::clone(psi);
                numerics::tanh_sinh(&move |s| 1.0 / psi(s), 0.0, t, CUSTOM_PHI_REL_TOL)
            }
        }
    }

    /// Evaluates the inverse time map t = φ_α⁻¹(τ).
    ///
    /// Built-in kinds invert their closed forms; `Custom` brackets the root
    /// of φ(t) − τ, growing the bracket geometrically, then refines with
    /// Brent's method.
    pub fn phi_inverse(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::Domain(format!(
                "phi_inverse requires tau >= 0, got {tau}"
            )));
        }
        if tau == 0.0 {
            return Ok(0.0);
        }
        let a = self.alpha;
        match &self.kind {
            WeightKind::PowerLaw => Ok((a * tau).powf(1.0 / a)),
            WeightKind::Exponential => {
                if a == 1.0 {
                    Ok(tau)
                } else {
                    Ok(((1.0 - a) * tau).ln_1p() / (1.0 - a))
                }
            }
            WeightKind::GammaScaled => Ok((a * tau / gamma_function(a + 1.0)?).powf(1.0 / a)),
            WeightKind::Custom { .. } => {
                // Grow the bracket until phi(hi) >= tau.
                let mut hi = 1.0;
                let mut phi_hi = self.phi(hi)?;
                let mut growths = 0;
                while phi_hi < tau {
                    hi *= 2.0;
                    growths += 1;
                    if growths > 200 {
                        return Err(Error::RootFindingFailure(format!(
                            "bracket for tau = {tau} not found below t = {hi}"
                        )));
                    }
                    phi_hi = self.phi(hi)?;
                }
                let failed = std::cell::Cell::new(false);
                let g = |t: f64| match self.phi(t) {
                    Ok(v) => v - tau,
                    Err(_) => {
                        failed.set(true);
                        f64::NAN
                    }
                };
                let root = numerics::brent(&g, 0.0, hi, 1e-13 * hi.max(1.0))?;
                if failed.get() {
                    return Err(Error::RootFindingFailure(format!(
                        "time-map evaluation failed while inverting tau = {tau}"
                    )));
                }
                Ok(root)
            }
        }
    }
}
