//! Analytic runtime and width bounds for the loglinear nonlinearity `f(p) = log p`.
//!
//! With `R' = (N-k)/k` the runtime integrand is
//! `1 / ((1 + g log(R' x/(1-x))) sqrt((1-x)(Nx-k)))` over `[k/N, 1]`, times
//! `N / (2 sqrt(k))`. The bounds split the range at `x = 1/2`.

use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

use super::expint::exp_integral_e1_scaled;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuntimeBounds {
    /// Lower bound with the exponential integral replaced by its elementary
    /// upper estimate. Negative for small `g`.
    pub lower: f64,
    /// Lower bound from the split integral, exact in terms of `E1`.
    pub lower_split: f64,
    /// Upper bound from linearising the logarithm on each half.
    pub upper: f64,
    pub upper_loose: f64,
}

fn check(n: u64, k: u64, g: f64) -> Result<(f64, f64)> {
    if k == 0 || n <= 2 * k {
        return domain(format!("loglinear bounds need N > 2k, got N = {n}, k = {k}"));
    }
    if !(g > 0.0 && g.is_finite()) {
        return domain(format!("loglinear bounds need finite g > 0, got {g}"));
    }
    Ok((n as f64, k as f64))
}

/// `atan(sqrt(p) s) / sqrt(p)`, continued analytically to `p <= 0`.
fn atan_over_sqrt(p: f64, s: f64) -> f64 {
    if p > 0.0 {
        (p.sqrt() * s).atan() / p.sqrt()
    } else if p < 0.0 {
        (p.abs().sqrt() * s).atanh() / p.abs().sqrt()
    } else {
        s
    }
}

pub fn log_runtime_bounds(n: u64, k: u64, g: f64) -> Result<RuntimeBounds> {
    let (nf, kf) = check(n, k, g)?;
    let l = ((nf - kf) / kf).ln();
    let scale = nf / (2.0 * kf.sqrt());
    let pref = scale / (nf - kf).sqrt();
    let first_half = (2.0 * (nf - 2.0 * kf) / nf).sqrt() / (1.0 + g * l);

    let l2 = (2.0 * (nf - kf) / kf).ln();
    let lower = pref * (first_half - (1.0 + 2.0 * g / (1.0 + g * l2)).ln() / (SQRT_2 * g));
    let w = (1.0 + g * l2) / (2.0 * g);
    let lower_split = pref * (first_half + exp_integral_e1_scaled(w)? / (SQRT_2 * g));

    let upper_loose =
        scale * (2.0 * (nf - 2.0 * kf).sqrt() / nf + 2.0 / ((nf - 2.0 * kf).sqrt() * (1.0 + g * l)));

    let q = nf - 2.0 * kf + 2.0 * g * (nf - kf) * l;
    let p = 4.0 * g * kf + nf - 2.0 * g * nf + g * nf * l;
    let m = 1.0 + 2.0 * g + g * l;
    let t1 = -2.0 * (nf - 2.0 * kf).sqrt() / (nf.sqrt() * q.sqrt()) * (nf.sqrt() / q.sqrt()).atan();
    let t2 = PI / ((nf - kf).sqrt() * nf.sqrt()) * ((nf * nf - 3.0 * kf * nf + 2.0 * kf * kf) / q).sqrt();
    let t3 = 2.0 * atan_over_sqrt(p, 1.0 / ((nf - 2.0 * kf).sqrt() * m.sqrt())) / m.sqrt();
    let upper = scale * (t1 + t2 + t3);

    Ok(RuntimeBounds { lower, lower_split, upper, upper_loose })
}

/// One grid point of the runtime integrand and its bounding integrands.
///
/// All values omit the common factor `N / (2 sqrt(k))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundIntegrands {
    pub x: f64,
    pub original: f64,
    pub lower: f64,
    pub upper_loose: f64,
    pub upper: f64,
    /// `log(R' x/(1-x))`
    pub log_exact: f64,
    /// The chord (`x < 1/2`) or tangent (`x >= 1/2`) replacing it in `upper`.
    pub log_linear: f64,
}

/// Integrands at `x` in the open interval `(k/N, 1)`.
pub fn bound_integrands(n: u64, k: u64, g: f64, x: f64) -> Result<BoundIntegrands> {
    let (nf, kf) = check(n, k, g)?;
    if !(x > kf / nf && x < 1.0) {
        return domain(format!("x must lie in (k/N, 1), got {x}"));
    }
    let r = (nf - kf) / kf;
    let l = r.ln();
    let u = 1.0 - x;
    let log_exact = (r * x / u).ln();
    let base = (u * (nf * x - kf)).sqrt();
    let original = 1.0 / ((1.0 + g * log_exact) * base);
    let (lower, upper_loose, log_linear) = if x < 0.5 {
        (
            1.0 / ((1.0 + g * l) * ((1.0 - kf / nf) * (nf * x - kf)).sqrt()),
            1.0 / (0.5 * (nf * x - kf)).sqrt(),
            2.0 / (nf - 2.0 * kf) * l * (nf * x - kf),
        )
    } else {
        (
            1.0 / ((1.0 + g * (r / u).ln()) * (u * (nf - kf)).sqrt()),
            1.0 / ((1.0 + g * l) * (u * (0.5 * nf - kf)).sqrt()),
            l + 4.0 * (x - 0.5),
        )
    };
    let upper = 1.0 / ((1.0 + g * log_linear) * base);
    Ok(BoundIntegrands { x, original, lower, upper_loose, upper, log_exact, log_linear })
}

/// Lower-bound witness for the peak width at height `1 - epsilon`:
/// `sqrt(epsilon) sqrt(N/k) / (g log(N/(k epsilon)))`.
///
/// Obtained by bounding the runtime integrand from below over `[1 - epsilon, 1]`.
pub fn log_width_bound(n: u64, k: u64, g: f64, epsilon: f64) -> Result<f64> {
    Ok(epsilon.sqrt() * log_width_order(n, k, g, epsilon)?)
}

/// `sqrt(N/k) / (g log(N/(k epsilon)))`, the order of the width without the
/// `sqrt(epsilon)` factor.
pub fn log_width_order(n: u64, k: u64, g: f64, epsilon: f64) -> Result<f64> {
    if !(g > 0.0 && g.is_finite()) {
        return domain(format!("width bound needs finite g > 0, got {g}"));
    }
    if k == 0 || k >= n {
        return domain(format!("need 1 <= k < N, got N = {n}, k = {k}"));
    }
    let (nf, kf) = (n as f64, k as f64);
    if !(epsilon > 0.0 && epsilon < 1.0 - kf / nf) {
        return domain(format!("epsilon must lie in (0, 1 - k/N), got {epsilon}"));
    }
    Ok((nf / kf).sqrt() / (g * (nf / (kf * epsilon)).ln()))
}
