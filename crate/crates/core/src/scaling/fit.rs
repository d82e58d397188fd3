//! Ordinary least squares of `log t` against `log N`.

use serde::Serialize;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    /// `c` in `t = c N^e`.
    pub coefficient: f64,
    pub exponent: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

impl PowerLawFit {
    pub fn predict(&self, n: f64) -> f64 {
        self.coefficient * n.powf(self.exponent)
    }
}

/// Fits `t = c N^e` to `(N, t)` pairs. Two points give the exact line through them.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return domain(format!("need at least two points, got {}", points.len()));
    }
    if let Some(&(n, t)) = points.iter().find(|&&(n, t)| !(n > 0.0 && t > 0.0 && n.is_finite() && t.is_finite())) {
        return domain(format!("points must be positive and finite, got ({n}, {t})"));
    }
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(n, t)| (n.ln(), t.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * m {
        return Err(Error::Degenerate("all N values are equal".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    Ok(PowerLawFit { coefficient: intercept.exp(), exponent, r_squared, points: points.to_vec() })
}
