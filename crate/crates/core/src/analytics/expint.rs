//! The exponential integral `E1(x) = int_x^inf e^{-t}/t dt`.

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `E1(x)` for `x > 0`, relative accuracy near machine precision.
///
/// Power series for `x <= 1`, continued fraction (modified Lentz) above.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("E1 requires x > 0, got {x}"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= 1.0 { series(x) } else { continued_fraction(x) * (-x).exp() })
}

/// `e^x E1(x)`, finite for arguments where `E1` alone underflows.
pub fn exp_integral_e1_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("E1 requires x > 0, got {x}"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= 1.0 { series(x) * x.exp() } else { continued_fraction(x) })
}

fn series(x: f64) -> f64 {
    // E1(x) = -gamma - ln x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..200 {
        let nf = n as f64;
        term *= -x / nf;
        let contrib = -term / nf;
        sum += contrib;
        if contrib.abs() < f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// `e^x E1(x)` by continued fraction.
fn continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            break;
        }
    }
    h
}

/// Lower and upper elementary bounds
/// `e^{-x} ln(1 + 2/x) / 2 < E1(x) < e^{-x} ln(1 + 1/x)`.
pub fn e1_bounds(x: f64) -> (f64, f64) {
    let e = (-x).exp();
    (0.5 * e * (2.0 / x).ln_1p(), e * (1.0 / x).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::quadrature::{integrate, QuadOptions};

    /// `E1(x) = int_0^inf exp(-x e^s) ds`, independent of the series/fraction split.
    fn e1_by_quadrature(x: f64) -> f64 {
        let s_max = (750.0 / x).ln();
        let f = |s: f64| (-x * s.exp()).exp();
        integrate(f, 0.0, s_max, &QuadOptions { rel_tol: 2e-13, abs_tol: 0.0, max_intervals: 5000 })
            .unwrap()
            .value
    }

    #[test]
    fn matches_quadrature_oracle() {
        for &x in &[1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0, 1.0000001, 1.5, 2.0, 5.0, 10.0, 30.0] {
            let v = exp_integral_e1(x).unwrap();
            let q = e1_by_quadrature(x);
            assert!(((v - q) / q).abs() < 1e-12, "x={x}: {v} vs {q}");
        }
    }

    #[test]
    fn reference_value_at_one() {
        // scipy.special.exp1(1.0)
        let v = exp_integral_e1(1.0).unwrap();
        assert!((v - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((v - 0.219384).abs() < 1e-5);
    }

    #[test]
    fn elementary_bounds_hold() {
        for i in 1..=100 {
            let x = i as f64 * 0.1;
            let (lo, hi) = e1_bounds(x);
            let v = exp_integral_e1(x).unwrap();
            assert!(lo < v && v < hi, "x={x}");
        }
    }

    #[test]
    fn large_argument_asymptotic() {
        let x = 50.0;
        let v = exp_integral_e1(x).unwrap();
        assert!((v * x * x.exp() - 1.0).abs() < 0.03);
    }

    #[test]
    fn scaled_form() {
        for &x in &[0.3, 1.0, 2.5, 40.0] {
            let a = exp_integral_e1_scaled(x).unwrap();
            let b = exp_integral_e1(x).unwrap() * x.exp();
            assert!(((a - b) / b).abs() < 1e-14);
        }
        let big = exp_integral_e1_scaled(1e4).unwrap();
        assert!((big * 1e4 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn domain() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
        assert!(exp_integral_e1(f64::NAN).is_err());
    }
}
