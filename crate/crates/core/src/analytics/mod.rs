//! Runtimes and peak widths from closed forms, quadrature and analytic bounds.

pub mod cubic;
pub mod cubic_quintic;
pub mod expint;
pub mod loglinear;
pub mod quadrature;

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

pub use cubic::{cubic_probability, cubic_runtime, cubic_width_exact};
pub use cubic_quintic::{cq_runtime_closed, cq_runtime_report, CqRuntimeReport, CubicQuinticCoefficients};
pub use expint::{e1_bounds, exp_integral_e1, exp_integral_e1_scaled};
pub use loglinear::{bound_integrands, log_runtime_bounds, log_width_bound, log_width_order, BoundIntegrands, RuntimeBounds};
pub use quadrature::{integrate, QuadOptions, QuadResult};

use crate::error::{domain, Error, Result};
use crate::model::{NonlinearityKind, SearchProblem};

/// Default height offset for width reports.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Smallest `1 - x` handed to `f` during quadrature.
const ONE_MINUS_X_FLOOR: f64 = 1e-15;

fn speedup(problem: &SearchProblem, x: f64, one_minus_x: f64) -> Result<f64> {
    let factor = 1.0 + problem.g * problem.eval_split(x, one_minus_x)?.difference();
    if factor <= 0.0 {
        return Err(Error::NonPhysical { x, value: factor });
    }
    Ok(factor)
}

/// Runs `integrate` on a closure that may fail, surfacing the first failure.
fn integrate_fallible(
    f: impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let failure = std::cell::RefCell::new(None);
    let r = integrate(
        |t| match f(t) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        opts,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    r
}

/// First time the success probability reaches 1, by quadrature of `dt/dx`.
///
/// With `x = k/N + (1 - k/N) sin^2(theta)` the endpoint singularities cancel and
/// `t_* = sqrt(N/k) int_0^{pi/2} dtheta / (1 + g (f_alpha - f_beta))`.
pub fn runtime_quadrature(problem: &SearchProblem) -> Result<f64> {
    runtime_quadrature_with(problem, &QuadOptions { rel_tol: 1e-11, ..Default::default() })
}

pub fn runtime_quadrature_with(problem: &SearchProblem, opts: &QuadOptions) -> Result<f64> {
    problem.validate()?;
    let x0 = problem.x0();
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = x0 + (1.0 - x0) * s * s;
        let one_minus_x = ((1.0 - x0) * c * c).max(ONE_MINUS_X_FLOOR);
        Ok(1.0 / speedup(problem, x.min(1.0), one_minus_x)?)
    };
    let r = integrate_fallible(integrand, 0.0, FRAC_PI_2, opts)?;
    Ok(problem.ratio().sqrt() * r.value)
}

/// Time spent above `1 - epsilon` around the first peak, by quadrature.
///
/// The peak is symmetric because `(dx/dt)^2` depends on `x` alone. With
/// `1 - x = epsilon s^2` the width is
/// `(N/sqrt(k)) 2 sqrt(epsilon) int_0^1 ds / (sqrt(N(1 - epsilon s^2) - k) F(x))`.
pub fn width_quadrature(problem: &SearchProblem, epsilon: f64) -> Result<f64> {
    problem.validate()?;
    let (n, k) = (problem.n_f64(), problem.k_f64());
    if !(epsilon > 0.0 && epsilon < 1.0 - problem.x0()) {
        return domain(format!("epsilon must lie in (0, 1 - k/N), got {epsilon}"));
    }
    let integrand = |s: f64| {
        let u = (epsilon * s * s).max(f64::MIN_POSITIVE);
        let x = 1.0 - epsilon * s * s;
        Ok(1.0 / ((n * x - k).sqrt() * speedup(problem, x, u)?))
    };
    let r = integrate_fallible(integrand, 0.0, 1.0, &QuadOptions { rel_tol: 1e-11, ..Default::default() })?;
    Ok(n / k.sqrt() * 2.0 * epsilon.sqrt() * r.value)
}

/// Leading-order width `2N / (1 + g (f_alpha - f_beta)|_{x=1}) sqrt(epsilon / (k (N - k)))`.
pub fn general_width_leading(problem: &SearchProblem, epsilon: f64) -> Result<f64> {
    problem.validate()?;
    if problem.kind == NonlinearityKind::Loglinear {
        return Err(Error::Unsupported(
            "f_alpha - f_beta diverges at x = 1 for the log nonlinearity; use log_width_bound".into(),
        ));
    }
    if !(epsilon > 0.0) {
        return domain(format!("epsilon must be positive, got {epsilon}"));
    }
    let (n, k) = (problem.n_f64(), problem.k_f64());
    let factor = speedup(problem, 1.0, 0.0)?;
    Ok(2.0 * n / factor * (epsilon / (k * (n - k))).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthReport {
    pub epsilon: f64,
    /// Closed form, cubic only.
    pub exact: Option<f64>,
    pub leading_order: Option<f64>,
    /// Lower-bound witness, loglinear only.
    pub bound: Option<f64>,
    pub quadrature: f64,
}

pub fn width_report(problem: &SearchProblem, epsilon: f64) -> Result<WidthReport> {
    let (n, k, g) = (problem.n, problem.k, problem.g);
    let quadrature = width_quadrature(problem, epsilon)?;
    let mut report = WidthReport { epsilon, exact: None, leading_order: None, bound: None, quadrature };
    match problem.kind {
        NonlinearityKind::Cubic => {
            report.exact = Some(cubic_width_exact(n, k, g, epsilon)?);
            report.leading_order = Some(general_width_leading(problem, epsilon)?);
        }
        NonlinearityKind::CubicQuintic => {
            report.leading_order = Some(general_width_leading(problem, epsilon)?);
        }
        NonlinearityKind::Loglinear => {
            if g > 0.0 {
                report.bound = Some(log_width_bound(n, k, g, epsilon)?);
            }
        }
    }
    Ok(report)
}
