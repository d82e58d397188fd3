//! Property checks shared by the proptest suite and the acceptance harness.
#![allow(dead_code)]

use nlsearch_core::analytics::{cubic_runtime, runtime_quadrature};
use nlsearch_core::dynamics::{integrate_full, integrate_reduced, FullTrajectory, Trajectory};
use nlsearch_core::{NonlinearityKind, SearchProblem};

pub type Check = Result<(), String>;

pub const TOL: f64 = 1e-10;

/// Integration horizon covering the first peak with some margin.
pub fn horizon(p: &SearchProblem) -> f64 {
    1.3 * runtime_quadrature(p).expect("runtime quadrature")
}

pub fn reduced(p: &SearchProblem, t_end: f64, tol: f64) -> Result<Trajectory, String> {
    integrate_reduced(p, t_end, tol).map_err(|e| format!("{p:?}: {e}"))
}

pub fn norm_conservation(p: &SearchProblem) -> Check {
    let tr = reduced(p, horizon(p), TOL)?;
    let drift = tr.max_norm_drift();
    if drift <= 10.0 * TOL {
        Ok(())
    } else {
        Err(format!("{p:?}: norm drift {drift:e}"))
    }
}

pub fn linear_relation(p: &SearchProblem) -> Check {
    let tr = reduced(p, horizon(p), TOL)?;
    let c = (p.k_f64() / (p.n_f64() - p.k_f64())).sqrt();
    for s in tr.samples() {
        let expected = -c * (s.x() - 1.0);
        if (s.y() - expected).abs() > 1e-8 {
            return Err(format!("{p:?}: y = {} vs {expected} at t = {}", s.y(), s.t));
        }
    }
    Ok(())
}

/// `(dx/dt)^2 = 4k(1-x)(Nx-k)[1 + g(f_alpha - f_beta)]^2 / N^2`.
pub fn h_of_x(p: &SearchProblem, x: f64) -> f64 {
    let (n, k) = (p.n_f64(), p.k_f64());
    let f = p.speedup_factor(x).expect("speedup factor");
    4.0 * k * (1.0 - x) * (n * x - k) * f * f / (n * n)
}

pub fn velocity_law(p: &SearchProblem) -> Check {
    let t_star = runtime_quadrature(p).map_err(|e| e.to_string())?;
    let tr = reduced(p, 1.05 * t_star, 1e-12)?;
    let x0 = p.x0();
    let dt = 1e-5 * t_star;
    for i in 1..40 {
        let t = t_star * i as f64 / 40.0;
        let x = tr.x_at(t);
        // away from both endpoints, where h vanishes
        if x < x0 + 0.05 * (1.0 - x0) || x > 0.95 {
            continue;
        }
        let v = (tr.x_at(t + dt) - tr.x_at(t - dt)) / (2.0 * dt);
        let h = h_of_x(p, x);
        if ((v * v - h) / h).abs() > 1e-5 {
            return Err(format!("{p:?}: (dx/dt)^2 = {} vs h = {h} at x = {x}", v * v));
        }
    }
    Ok(())
}

pub fn cubic_periodicity(n: u64, k: u64, g: f64) -> Check {
    let p = SearchProblem::new(n, k, g, NonlinearityKind::Cubic).map_err(|e| e.to_string())?;
    let ts = cubic_runtime(n, k, g);
    let tr = reduced(&p, 3.05 * ts, TOL)?;
    for i in 0..=50 {
        let t = ts * i as f64 / 50.0;
        let (a, b) = (tr.x_at(t), tr.x_at(t + 2.0 * ts));
        if (a - b).abs() > 1e-6 {
            return Err(format!("{p:?}: x({t}) = {a}, x(t + 2t*) = {b}"));
        }
    }
    Ok(())
}

pub struct OracleGap {
    pub max_dx: f64,
    pub max_spread: f64,
}

/// Largest gap between full-space and reduced success probabilities, and the
/// largest within-subspace amplitude spread, over one peak.
pub fn full_vs_reduced(p: &SearchProblem) -> Result<OracleGap, String> {
    let t_end = horizon(p);
    let tr = reduced(p, t_end, 1e-12)?;
    let full: FullTrajectory = integrate_full(p, t_end, 1e-12).map_err(|e| format!("{p:?}: {e}"))?;
    let mut max_dx: f64 = 0.0;
    for i in 0..=400 {
        let t = t_end * i as f64 / 400.0;
        max_dx = max_dx.max((tr.x_at(t) - full.marked_probability_at(t)).abs());
    }
    let max_spread = full
        .samples()
        .iter()
        .map(|s| {
            let (a, b) = s.subspace_spread();
            a.max(b)
        })
        .fold(0.0, f64::max);
    Ok(OracleGap { max_dx, max_spread })
}
