//! Internal numerical kernels: adaptive Gauss-Kronrod quadrature, tanh-sinh
//! quadrature for endpoint singularities, Brent root bracketing, and local
//! cubic interpolation.
//!
//! These are support routines, not part of the public surface; the public
//! modules re-export nothing from here.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1] (positive half; the rule is symmetric).
// Every second entry starting at index 1 is a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// 7-point Gauss weights for the embedded rule (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod 15(7) panel: returns (integral, error estimate).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    let integral = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (integral, err)
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate satisfies `max(abs_tol, rel_tol * |I|)`. Errors out rather than
/// returning a value that missed the tolerance.
pub(crate) fn integrate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };

    struct Seg {
        a: f64,
        b: f64,
        integral: f64,
        err: f64,
    }
    let (i0, e0) = gk15(f, lo, hi);
    let mut segs = vec![Seg { a: lo, b: hi, integral: i0, err: e0 }];

    const MAX_SEGS: usize = 4096;
    loop {
        let total: f64 = segs.iter().map(|s| s.integral).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureNoConvergence(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(sign * total);
        }
        if segs.len() >= MAX_SEGS {
            return Err(Error::QuadratureNoConvergence(format!(
                "tolerance not reached on [{lo}, {hi}] after {MAX_SEGS} segments (err {err:e})"
            )));
        }
        // Split the worst segment.
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let Seg { a: sa, b: sb, .. } = segs.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            return Err(Error::QuadratureNoConvergence(format!(
                "segment [{sa}, {sb}] no longer splittable"
            )));
        }
        let (il, el) = gk15(f, sa, mid);
        let (ir, er) = gk15(f, mid, sb);
        segs.push(Seg { a: sa, b: mid, integral: il, err: el });
        segs.push(Seg { a: mid, b: sb, integral: ir, err: er });
    }
}

/// Tanh-sinh (double-exponential) integration of `f` over `[a, b]`.
///
/// Nodes cluster double-exponentially at both endpoints, so integrable
/// endpoint singularities (e.g. s^(alpha-1) at s = 0) converge geometrically.
/// The integrand is never evaluated exactly at `a` or `b`.
pub(crate) fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    const U_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;

    // Contribution of the pair of nodes at +/- u; offsets from the endpoints
    // are computed directly to keep precision near the singularity.
    let pair = |u: f64| -> f64 {
        let v = std::f64::consts::FRAC_PI_2 * u.sinh();
        let sech2 = {
            let c = v.cosh();
            1.0 / (c * c)
        };
        let weight = std::f64::consts::FRAC_PI_2 * u.cosh() * sech2;
        // 1 - tanh(v) = 2 / (1 + e^{2v}); distance of the node from each endpoint.
        let off = width / (1.0 + (2.0 * v).exp());
        if off == 0.0 || weight == 0.0 {
            return 0.0;
        }
        let left = f(a + off);
        let right = f(b - off);
        weight * (left + right)
    };

    let center = f(0.5 * (a + b));
    let mut h = 1.0;
    // Level 0: nodes at u = 0, ±1, ±2, ±3, ±4.
    let mut sum = std::f64::consts::FRAC_PI_2 * center;
    let mut k = 1;
    while (k as f64) * h <= U_MAX {
        sum += pair(k as f64 * h);
        k += 1;
    }
    let mut estimate = 0.5 * width * h * sum;

    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        // Add the new odd multiples of h.
        let mut j = 1;
        while (j as f64) * h <= U_MAX {
            sum += pair(j as f64 * h);
            j += 2;
        }
        let refined = 0.5 * width * h * sum;
        let change = (refined - estimate).abs();
        estimate = refined;
        if change <= rel_tol * estimate.abs().max(f64::MIN_POSITIVE) && estimate.is_finite() {
            return Ok(estimate);
        }
    }
    if !estimate.is_finite() {
        return Err(Error::QuadratureNoConvergence(format!(
            "non-finite tanh-sinh estimate on [{a}, {b}]"
        )));
    }
    Err(Error::QuadratureNoConvergence(format!(
        "tanh-sinh failed to reach rel_tol {rel_tol:e} on [{a}, {b}]"
    )))
}

/// Brent's method on a bracketing interval `[a, b]` with `f(a)·f(b) <= 0`.
///
/// Combines bisection, secant, and inverse quadratic steps; always converges
/// for a continuous bracketed function. `tol` is an absolute tolerance on x.
pub(crate) fn brent(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::RootFindingFailure(format!(
            "no sign change on [{a}, {b}] (f = {fa:e}, {fb:e})"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;

    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation.
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            // Secant step.
            b - fb * (b - a) / (fb - fa)
        };

        let lo = (3.0 * a + b) / 4.0;
        let within = (s > lo.min(b) && s < lo.max(b)) || (s > b.min(lo) && s < b.max(lo));
        let step_ok = if bisected {
            (s - b).abs() < 0.5 * d.abs() && d.abs() > tol
        } else {
            (s - b).abs() < 0.5 * c.abs().max(1.0) * f64::EPSILON + 0.5 * d.abs()
        };
        if !within || !step_ok {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }

        let fs = f(s);
        d = c - b;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::RootFindingFailure(format!(
        "no convergence to tol {tol:e}; best bracket [{a}, {b}]"
    )))
}

/// Local cubic (4-point Lagrange) interpolation of tabulated data.
///
/// `xs` must be strictly increasing and bracket `x`. Falls back to the
/// highest order the table supports when fewer than four points exist.
pub(crate) fn cubic_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n == 1 {
        return ys[0];
    }
    // Segment index: xs[seg] <= x < xs[seg + 1] (clamped at the ends).
    let seg = match xs.partition_point(|&v| v <= x) {
        0 => 0,
        p => (p - 1).min(n - 2),
    };
    // Window of up to four points centered on the segment.
    let start = seg.saturating_sub(1).min(n.saturating_sub(4));
    let count = 4.min(n);
    let (xs, ys) = (&xs[start..start + count], &ys[start..start + count]);

    let mut acc = 0.0;
    for i in 0..count {
        let mut term = ys[i];
        for j in 0..count {
            if i != j {
                term *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_panel_is_exact_for_degree_22() {
        // A 15-point Kronrod rule integrates polynomials up to degree 22 exactly.
        let (val, _) = gk15(&|x: f64| x.powi(22), 0.0, 1.0);
        assert!((val - 1.0 / 23.0).abs() < 1e-15);
        let (val, _) = gk15(&|x: f64| x.powi(20) - 3.0 * x.powi(7), -1.0, 1.0);
        assert!((val - 2.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_integrates_smooth_and_peaked() {
        let exp_int = integrate(&|x: f64| x.exp(), 0.0, 1.0, 1e-12, 0.0).unwrap();
        assert!((exp_int - (std::f64::consts::E - 1.0)).abs() < 1e-12);

        // Narrow Gaussian, area sqrt(pi)/100.
        let peak = integrate(&|x: f64| (-(100.0 * x).powi(2)).exp(), -3.0, 5.0, 1e-10, 0.0).unwrap();
        assert!((peak - std::f64::consts::PI.sqrt() / 100.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_reversed_bounds() {
        let fwd = integrate(&|x: f64| x * x, 0.0, 2.0, 1e-12, 0.0).unwrap();
        let rev = integrate(&|x: f64| x * x, 2.0, 0.0, 1e-12, 0.0).unwrap();
        assert!((fwd + rev).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2, singular at the left endpoint.
        let v = tanh_sinh(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "got {v}");
        // int_0^4 x^{-0.7} dx = 4^{0.3}/0.3, a sharper singularity.
        let v = tanh_sinh(&|x: f64| x.powf(-0.7), 0.0, 4.0, 1e-12).unwrap();
        let exact = 4.0f64.powf(0.3) / 0.3;
        assert!((v - exact).abs() < 1e-10 * exact, "got {v}, want {exact}");
    }

    #[test]
    fn tanh_sinh_matches_smooth_integral() {
        let v = tanh_sinh(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn brent_finds_bracketed_roots() {
        let r = brent(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        let r = brent(&|x: f64| x.cos() - x, 0.0, 1.0, 1e-14).unwrap();
        assert!((r.cos() - r).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_unbracketed_interval() {
        assert!(brent(&|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn cubic_interp_reproduces_cubics_exactly() {
        // 4-point Lagrange is exact for cubics regardless of spacing.
        let xs = [0.0, 0.7, 1.1, 2.3, 3.0, 4.2];
        let f = |x: f64| 2.0 * x.powi(3) - x * x + 0.5 * x - 3.0;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        for &q in &[0.1, 0.9, 1.7, 2.5, 3.9] {
            assert!((cubic_interp(&xs, &ys, q) - f(q)).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_interp_degrades_gracefully_on_short_tables() {
        let xs = [0.0, 1.0];
        let ys = [1.0, 3.0];
        assert!((cubic_interp(&xs, &ys, 0.5) - 2.0).abs() < 1e-15);
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 1.0, 4.0]; // x^2
        assert!((cubic_interp(&xs, &ys, 1.5) - 2.25).abs() < 1e-14);
    }
}
