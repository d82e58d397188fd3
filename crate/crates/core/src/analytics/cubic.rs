//! Closed forms for the cubic nonlinearity `f(p) = p`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};

/// `t_* = pi sqrt(N) / (2 sqrt(k + g))`.
pub fn cubic_runtime(n: u64, k: u64, g: f64) -> f64 {
    FRAC_PI_2 * (n as f64).sqrt() / (k as f64 + g).sqrt()
}

/// Success probability `x(t)`, periodic with period `2 t_*`.
pub fn cubic_probability(t: f64, n: u64, k: u64, g: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    let u = FRAC_PI_2 - ((k + g) / n).sqrt() * t;
    // tan^2 form multiplied through by cos^2 to stay bounded at the poles
    let (s2, c2) = (u.sin().powi(2), u.cos().powi(2));
    (n * c2 + (k + g) * s2) / (n * c2 + n / k * (k + g) * s2)
}

/// Exact width of the peak at height `1 - epsilon`.
pub fn cubic_width_exact(n: u64, k: u64, g: f64, epsilon: f64) -> Result<f64> {
    let (n, k) = (n as f64, k as f64);
    let room = n * (1.0 - epsilon) - k;
    if !(epsilon >= 0.0) || room <= 0.0 {
        return domain(format!("need 0 <= epsilon and N(1 - epsilon) > k, got epsilon = {epsilon}"));
    }
    let arg = (n * k).sqrt() * epsilon.sqrt() / ((k + g).sqrt() * room.sqrt());
    Ok(2.0 * (n / (k + g)).sqrt() * arg.atan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn runtime_values() {
        assert!((cubic_runtime(100, 1, 0.0) - 5.0 * PI).abs() < 1e-14);
        assert!((cubic_runtime(100, 1, 99.0) - PI / 2.0).abs() < 1e-15);
        assert!((cubic_runtime(4, 1, 0.0) - PI).abs() < 1e-15);
    }

    #[test]
    fn probability_endpoints_and_period() {
        for (n, k, g) in [(100u64, 1u64, 0.0), (1000, 3, 50.0), (64, 8, 1.5)] {
            let ts = cubic_runtime(n, k, g);
            assert!((cubic_probability(0.0, n, k, g) - k as f64 / n as f64).abs() < 1e-15);
            assert!((cubic_probability(ts, n, k, g) - 1.0).abs() < 1e-15);
            for i in 0..20 {
                let t = ts * i as f64 / 20.0;
                let a = cubic_probability(t, n, k, g);
                let b = cubic_probability(t + 2.0 * ts, n, k, g);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn probability_inverts_time_formula() {
        // t(x) = -sqrt(N/(k+g)) [atan(sqrt(Nk) sqrt(1-x) / (sqrt(k+g) sqrt(Nx-k))) - pi/2]
        let (n, k, g) = (500u64, 2u64, 7.0);
        let (nf, kf) = (n as f64, k as f64);
        for i in 1..50 {
            let x = kf / nf + (1.0 - kf / nf) * i as f64 / 50.0;
            let t = -(nf / (kf + g)).sqrt()
                * (((nf * kf).sqrt() * (1.0 - x).sqrt() / ((kf + g).sqrt() * (nf * x - kf).sqrt()))
                    .atan()
                    - PI / 2.0);
            assert!((cubic_probability(t, n, k, g) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn width_limits() {
        assert_eq!(cubic_width_exact(1000, 1, 0.0, 0.0).unwrap(), 0.0);
        assert!(cubic_width_exact(10, 1, 0.0, 0.95).is_err());
        let w = cubic_width_exact(1000, 1, 0.0, 0.01).unwrap();
        assert!((w - 6.338_324_566_632_18).abs() < 1e-12);
    }
}
