//! Closed-form runtime for the cubic-quintic nonlinearity `f(p) = p - p^2`.
//!
//! With this `f`, `k^2 (N-k)^2 [1 + g (f_alpha - f_beta)] = a x^2 + b x + c`
//! and the runtime integral has an elementary antiderivative. Evaluating it
//! naively loses most significant digits once `b` dominates: the leading
//! `b N` terms of `xi` and `sqrt(Delta) (k - N)` cancel, and so do `2a + b`
//! and `sqrt(Delta)` when `k = 1`. Both differences are rewritten here so
//! that no two large nearly-equal quantities are subtracted.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicQuinticCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `b^2 - 4ac`
    pub delta: f64,
    /// `a + b + c`, evaluated as `(N-k)^2 (k^2 + g (k-1))`
    pub sigma: f64,
    /// `2ak + 2cN + b(k + N)`
    pub xi: f64,
}

impl CubicQuinticCoefficients {
    pub fn new(n: u64, k: u64, g: f64) -> Self {
        let (n, k) = (n as f64, k as f64);
        let a = -g * n * (n - 2.0 * k);
        let b = g * k * (n * n - k * n - 2.0 * k);
        let c = -g * k * k * (n - k - 1.0) + k * k * (n - k) * (n - k);
        Self {
            a,
            b,
            c,
            delta: b * b - 4.0 * a * c,
            sigma: (n - k) * (n - k) * (k * k + g * (k - 1.0)),
            xi: 2.0 * a * k + 2.0 * c * n + b * (k + n),
        }
    }

    /// The quadratic `a x^2 + b x + c`.
    pub fn quadratic(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

/// Intermediate quantities of the closed form, including the naive evaluation
/// of the cancelling denominator for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CqRuntimeReport {
    pub runtime: f64,
    pub coefficients: CubicQuinticCoefficients,
    /// `xi + sqrt(Delta)(k - N)`, cancellation-free.
    pub xi_plus: f64,
    /// The same quantity evaluated term by term as written.
    pub xi_plus_naive: f64,
    /// Decimal digits cancelled in the naive evaluation.
    pub digits_cancelled: f64,
}

/// Closed-form runtime, requiring `N > 2k` and `g > 0`.
pub fn cq_runtime_closed(n: u64, k: u64, g: f64) -> Result<f64> {
    Ok(cq_runtime_report(n, k, g)?.runtime)
}

pub fn cq_runtime_report(n: u64, k: u64, g: f64) -> Result<CqRuntimeReport> {
    if k == 0 || n <= 2 * k {
        return domain(format!("closed form needs N > 2k, got N = {n}, k = {k}"));
    }
    if !(g > 0.0 && g.is_finite()) {
        return domain(format!("closed form needs finite g > 0, got {g}"));
    }
    let co = CubicQuinticCoefficients::new(n, k, g);
    let (nf, kf) = (n as f64, k as f64);
    let CubicQuinticCoefficients { a, b, c, delta, sigma, xi } = co;
    if delta <= 0.0 {
        return domain(format!("Delta = {delta:e} is not positive"));
    }
    if sigma <= 0.0 {
        return domain(format!("Sigma = {sigma:e} is not positive"));
    }
    let sd = delta.sqrt();
    // sqrt(Delta) - b = (Delta - b^2) / (sqrt(Delta) + b) = -4ac / (sqrt(Delta) + b)
    let sd_minus_b = -4.0 * a * c / (sd + b);
    // a + b expanded: g [(k-1) N^2 + (2k - k^2) N - 2k^2]
    let a_plus_b = g * ((kf - 1.0) * nf * nf + (2.0 * kf - kf * kf) * nf - 2.0 * kf * kf);

    let num_plus = 2.0 * a_plus_b + sd_minus_b; // 2a + b + sqrt(Delta)
    let num_minus = -2.0 * a + sd_minus_b; // -2a - b + sqrt(Delta)
    let xi_plus = 2.0 * kf * a_plus_b + 2.0 * c * nf + (kf - nf) * sd_minus_b;
    let xi_minus = xi - sd * (kf - nf);
    let xi_plus_naive = xi + sd * (kf - nf);

    if xi_plus <= 0.0 {
        return domain(format!("radicand xi + sqrt(Delta)(k - N) = {xi_plus:e} is not positive"));
    }
    if xi_minus <= 0.0 {
        return domain(format!("radicand xi - sqrt(Delta)(k - N) = {xi_minus:e} is not positive"));
    }

    let prefactor = FRAC_PI_2 * nf * kf * kf * (nf - kf).powi(2) / (2.0 * kf.sqrt())
        * std::f64::consts::SQRT_2
        / (sigma.sqrt() * sd);
    let runtime = prefactor * (num_plus / xi_plus.sqrt() + num_minus / xi_minus.sqrt());

    let scale = (b * nf).abs().max(xi.abs());
    let digits_cancelled = (scale / xi_plus.abs()).log10().max(0.0);
    Ok(CqRuntimeReport { runtime, coefficients: co, xi_plus, xi_plus_naive, digits_cancelled })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn coefficients_consistent() {
        for (n, k, g) in [(1000u64, 2u64, 10.0), (100, 1, 3.0), (100_000, 2, 1e4), (50, 7, 0.25)] {
            let co = CubicQuinticCoefficients::new(n, k, g);
            let scale = co.a.abs().max(co.b.abs()).max(co.c.abs());
            assert!((co.sigma - (co.a + co.b + co.c)).abs() <= 4.0 * f64::EPSILON * scale);
            assert_eq!(co.delta, co.b * co.b - 4.0 * co.a * co.c);
            let (nf, kf) = (n as f64, k as f64);
            // the quadratic equals k^2 (N-k)^2 [1 + g (f_alpha - f_beta)]
            for x in [kf / nf, 0.3, 0.77, 1.0] {
                let (p, q) = (x / kf, (1.0 - x) / (nf - kf));
                let direct = kf * kf * (nf - kf).powi(2) * (1.0 + g * ((p - p * p) - (q - q * q)));
                assert!(rel(co.quadratic(x), direct) < 1e-9, "x={x}");
            }
        }
    }

    #[test]
    fn matches_high_precision_reference() {
        // 60-digit evaluation of the closed form (mpmath)
        let cases = [
            (1000u64, 2u64, 10.0, 16.452_986_286_124_19),
            (100_000, 2, 1e4, 5.015_757_442_283_303),
            (100_000, 1, 1e5, 3.141_561_238_134_282),
        ];
        for (n, k, g, expected) in cases {
            let got = cq_runtime_closed(n, k, g).unwrap();
            assert!(rel(got, expected) < 1e-12, "N={n} k={k} g={g}: {got}");
        }
    }

    #[test]
    fn naive_form_cancels_where_expected() {
        let r = cq_runtime_report(100_000, 1, 1e5).unwrap();
        assert!(r.digits_cancelled > 5.0);
        assert!(rel(r.xi_plus_naive, r.xi_plus) > 1e-8);
    }

    #[test]
    fn small_g_approaches_linear_limit() {
        let lin = std::f64::consts::FRAC_PI_2 * 1000f64.sqrt();
        let mut last = f64::INFINITY;
        for g in [1e-1, 1e-2, 1e-3, 1e-4] {
            let d = (cq_runtime_closed(1000, 1, g).unwrap() - lin).abs();
            assert!(d < last);
            last = d;
        }
        assert!(rel(cq_runtime_closed(1000, 1, 1e-6).unwrap(), lin) < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert!(cq_runtime_closed(4, 2, 1.0).is_err());
        assert!(cq_runtime_closed(100, 1, 0.0).is_err());
        assert!(cq_runtime_closed(100, 1, -1.0).is_err());
    }
}
