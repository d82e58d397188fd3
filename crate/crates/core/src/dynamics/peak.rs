//! Peak location and width at height `1 - epsilon` on a reduced trajectory.

use serde::Serialize;

use super::Trajectory;
use crate::error::{domain, Error, Result};

/// Resolution of the coarse scan that brackets the first peak.
const SCAN_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakReport {
    /// Time of the first maximum of the success probability.
    pub t_star: f64,
    pub x_max: f64,
    /// `t_right - t_left`, the time spent above `1 - epsilon`.
    pub width: f64,
    pub epsilon: f64,
    pub t_left: f64,
    pub t_right: f64,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Root of `f` in `[a, b]` by bisection, given `f(a)` and `f(b)` of opposite sign.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Bracket `[t_{i-1}, t_{i+1}]` around the first coarse-grid maximum.
fn coarse_bracket(traj: &Trajectory) -> (f64, f64, f64) {
    let t_end = traj.t_end();
    let dt = t_end / SCAN_POINTS as f64;
    let xs: Vec<f64> = (0..=SCAN_POINTS).map(|i| traj.x_at(i as f64 * dt)).collect();
    let x0 = xs[0];
    let x_top = xs.iter().cloned().fold(f64::MIN, f64::max);
    // first grid point in the upper half of the swing, then climb
    let half = x0 + 0.5 * (x_top - x0);
    let mut i = xs.iter().position(|&x| x >= half).unwrap_or(0);
    while i + 1 < xs.len() && xs[i + 1] >= xs[i] {
        i += 1;
    }
    let lo = i.saturating_sub(1) as f64 * dt;
    let hi = ((i + 1).min(SCAN_POINTS)) as f64 * dt;
    (lo, hi, dt)
}

/// Time of the first maximum of `x(t)`.
///
/// Golden-section search on the dense output brackets the maximum; the time
/// is then polished as the sign change of `z = Im(alpha conj(beta))`, which
/// is proportional to `dx/dt` and crosses zero linearly at the peak.
pub fn first_peak_time(traj: &Trajectory) -> Result<f64> {
    let (lo, hi, dt) = coarse_bracket(traj);
    let t_gold = golden_max(|t| traj.x_at(t), lo, hi, 1e-12 * hi.max(1.0));
    let z = |t: f64| traj.state_at(t).z();
    let (a, b) = ((t_gold - dt).max(0.0), (t_gold + dt).min(traj.t_end()));
    let t_star = if z(a) > 0.0 && z(b) < 0.0 {
        bisect(z, a, b, 4.0 * f64::EPSILON * b)
    } else {
        t_gold
    };
    if t_star >= traj.t_end() {
        return Err(Error::NoPeak { max: traj.x_at(t_star), threshold: f64::NAN });
    }
    Ok(t_star)
}

/// Locates the first peak and its width at height `1 - epsilon`.
pub fn measure_peak(traj: &Trajectory, epsilon: f64) -> Result<PeakReport> {
    let x0 = traj.problem.x0();
    if !(epsilon > 0.0 && epsilon < 1.0 - x0) {
        return domain(format!("epsilon must lie in (0, 1 - k/N), got {epsilon}"));
    }
    let threshold = 1.0 - epsilon;
    let t_star = first_peak_time(traj)?;
    let x_max = traj.x_at(t_star);
    if x_max < threshold {
        return Err(Error::NoPeak { max: x_max, threshold });
    }
    let above = |t: f64| traj.x_at(t) - threshold;
    let step = traj.t_end() / SCAN_POINTS as f64;
    let time_tol = 1e-10 * t_star;

    let mut left = t_star;
    loop {
        left = (left - step).max(0.0);
        if above(left) < 0.0 {
            break;
        }
        if left == 0.0 {
            return domain("peak does not drop below 1 - epsilon before t = 0");
        }
    }
    let mut right = t_star;
    loop {
        right = (right + step).min(traj.t_end());
        if above(right) < 0.0 {
            break;
        }
        if right >= traj.t_end() {
            return domain("trajectory ends before the peak drops below 1 - epsilon");
        }
    }
    let t_left = bisect(above, left, t_star, time_tol);
    let t_right = bisect(above, t_star, right, time_tol);
    Ok(PeakReport { t_star, x_max, width: t_right - t_left, epsilon, t_left, t_right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate_reduced;
    use crate::model::{NonlinearityKind, SearchProblem};

    fn arctan_width(n: f64, k: f64, g: f64, eps: f64) -> f64 {
        2.0 * (n / (k + g)).sqrt()
            * ((n * k).sqrt() * eps.sqrt() / ((k + g).sqrt() * (n * (1.0 - eps) - k).sqrt()))
                .atan()
    }

    #[test]
    fn linear_width_matches_arctan_form() {
        let p = SearchProblem::new(1000, 1, 0.0, NonlinearityKind::Cubic).unwrap();
        let tr = integrate_reduced(&p, 80.0, 1e-10).unwrap();
        let r = measure_peak(&tr, 0.01).unwrap();
        let exact = arctan_width(1000.0, 1.0, 0.0, 0.01);
        assert!(((r.width - exact) / exact).abs() < 1e-6, "{} vs {exact}", r.width);
        // symmetric about the peak
        let (l, rr) = (r.t_star - r.t_left, r.t_right - r.t_star);
        assert!(((l - rr) / l).abs() < 0.01);
    }

    #[test]
    fn no_peak_and_bad_epsilon() {
        let p = SearchProblem::new(1000, 1, 0.0, NonlinearityKind::Cubic).unwrap();
        let tr = integrate_reduced(&p, 20.0, 1e-10).unwrap();
        assert!(matches!(measure_peak(&tr, 0.01), Err(Error::NoPeak { .. })));
        assert!(measure_peak(&tr, 0.0).is_err());
        assert!(measure_peak(&tr, 1.0).is_err());
    }
}
