//! Browser bindings: trajectories, runtime summaries and scaling reports.

use nlsearch_core::analytics::{cq_runtime_closed, cubic_runtime, log_runtime_bounds, runtime_quadrature, width_report, DEFAULT_EPSILON};
use nlsearch_core::dynamics::integrate_reduced;
use nlsearch_core::scaling::{cq_scaling, cubic_scaling, log_scaling, parse_exponent, ScalingQuery};
use nlsearch_core::{NonlinearityKind, SearchProblem};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn problem(n: u32, k: u32, g: f64, kind: &str) -> Result<SearchProblem, String> {
    let kind: NonlinearityKind = kind.parse().map_err(|e: nlsearch_core::Error| e.to_string())?;
    SearchProblem::new(n as u64, k as u64, g, kind).map_err(|e| e.to_string())
}

/// `[t0, x0, t1, x1, ...]` up to `t_end`, or twice the runtime when `t_end <= 0`.
pub fn trajectory(n: u32, k: u32, g: f64, kind: &str, t_end: f64, points: u32) -> Result<Vec<f64>, String> {
    let p = problem(n, k, g, kind)?;
    let t_end = if t_end > 0.0 { t_end } else { 2.0 * runtime_quadrature(&p).map_err(|e| e.to_string())? };
    let tr = integrate_reduced(&p, t_end, 1e-9).map_err(|e| e.to_string())?;
    Ok(tr.sample_uniform(points as usize).into_iter().flat_map(|(t, x)| [t, x]).collect())
}

/// Runtime, closed form, loglinear bounds and peak width as JSON.
pub fn summary(n: u32, k: u32, g: f64, kind: &str) -> Result<String, String> {
    let p = problem(n, k, g, kind)?;
    let runtime = runtime_quadrature(&p).map_err(|e| e.to_string())?;
    let closed = match p.kind {
        NonlinearityKind::Cubic => Some(cubic_runtime(p.n, p.k, g)),
        NonlinearityKind::CubicQuintic => cq_runtime_closed(p.n, p.k, g).ok(),
        NonlinearityKind::Loglinear => None,
    };
    let bounds = match p.kind {
        NonlinearityKind::Loglinear => log_runtime_bounds(p.n, p.k, g).ok(),
        _ => None,
    };
    let width = width_report(&p, DEFAULT_EPSILON).ok();
    Ok(json!({
        "runtime": runtime,
        "closed_form": closed,
        "lower": bounds.map(|b| b.lower),
        "upper": bounds.map(|b| b.upper),
        "epsilon": DEFAULT_EPSILON,
        "width": width.map(|w| w.quadrature),
    })
    .to_string())
}

/// Symbolic scaling report as JSON. `a`, `b` are kappa, lambda, or sigma alone for `log`.
pub fn scaling(kind: &str, a: &str, b: &str) -> Result<String, String> {
    let kind: NonlinearityKind = kind.parse().map_err(|e: nlsearch_core::Error| e.to_string())?;
    let e = |s: &str| parse_exponent(s).map_err(|e| e.to_string());
    let report = match kind {
        NonlinearityKind::Cubic => cubic_scaling(ScalingQuery::new(e(a)?, e(b)?)),
        NonlinearityKind::CubicQuintic => cq_scaling(ScalingQuery::new(e(a)?, e(b)?)),
        NonlinearityKind::Loglinear => log_scaling(e(a)?),
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = trajectory)]
pub fn trajectory_js(n: u32, k: u32, g: f64, kind: &str, t_end: f64, points: u32) -> Result<Vec<f64>, JsError> {
    trajectory(n, k, g, kind, t_end, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = summary)]
pub fn summary_js(n: u32, k: u32, g: f64, kind: &str) -> Result<String, JsError> {
    summary(n, k, g, kind).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = scaling)]
pub fn scaling_js(kind: &str, a: &str, b: &str) -> Result<String, JsError> {
    scaling(kind, a, b).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_layout() {
        let v = trajectory(100, 1, 99.0, "cubic", 0.0, 11).unwrap();
        assert_eq!(v.len(), 22);
        assert_eq!(v[0], 0.0);
        assert!((v[1] - 0.01).abs() < 1e-12);
        // midpoint sample sits at the first peak, t = pi/2
        assert!((v[10] - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(v[11] > 0.999_999);
    }

    #[test]
    fn summary_fields() {
        let s: serde_json::Value = serde_json::from_str(&summary(1024, 5, 1.0, "log").unwrap()).unwrap();
        let (l, t, u) = (s["lower"].as_f64().unwrap(), s["runtime"].as_f64().unwrap(), s["upper"].as_f64().unwrap());
        assert!(l <= t && t <= u);
        assert!(s["closed_form"].is_null());
        let s: serde_json::Value = serde_json::from_str(&summary(100, 1, 99.0, "cubic").unwrap()).unwrap();
        assert!((s["closed_form"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn scaling_json() {
        let s: serde_json::Value = serde_json::from_str(&scaling("log", "1/2", "").unwrap()).unwrap();
        assert_eq!(s["space_time"]["upper"], "R^{1/4} log N");
        assert!(scaling("cubic", "x", "0").is_err());
        assert!(trajectory(4, 4, 0.0, "cubic", 0.0, 10).is_err());
    }
}
