//! Time evolution of the search state at the critical coupling.
//!
//! [`integrate_reduced`] solves the two-amplitude system for the marked and
//! unmarked components; [`integrate_full`] solves the same dynamics in the full
//! `N`-dimensional space and serves as an oracle for the reduction at small `N`.

pub mod dopri;
mod full;
mod peak;

use num_complex::Complex64;

pub use dopri::{DenseSolution, IntegratorOptions};
pub use full::{integrate_full, integrate_full_with, FullState, FullTrajectory};
pub use peak::{first_peak_time, measure_peak, PeakReport};

use crate::error::{domain, Error, Result};
use crate::model::{NonlinearEval, NonlinearityKind, SearchProblem, PROB_FLOOR};

/// Marked and unmarked subspace amplitudes at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub t: f64,
}

impl ReducedState {
    /// The uniform superposition, with real positive amplitudes.
    pub fn initial(problem: &SearchProblem) -> Self {
        let x0 = problem.x0();
        Self {
            alpha: Complex64::new(x0.sqrt(), 0.0),
            beta: Complex64::new((1.0 - x0).sqrt(), 0.0),
            t: 0.0,
        }
    }

    /// From the integrator layout: rotating-frame amplitudes and the frame phase.
    fn from_slice(t: f64, y: &[f64]) -> Self {
        let phase = Complex64::from_polar(1.0, y[4]);
        Self {
            alpha: Complex64::new(y[0], y[1]) * phase,
            beta: Complex64::new(y[2], y[3]) * phase,
            t,
        }
    }

    /// Success probability `|alpha|^2`.
    pub fn x(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// `Re(alpha conj(beta))`.
    pub fn y(&self) -> f64 {
        (self.alpha * self.beta.conj()).re
    }

    /// `Im(alpha conj(beta))`, proportional to `dx/dt`.
    pub fn z(&self) -> f64 {
        (self.alpha * self.beta.conj()).im
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

/// Subspace probabilities passed into `f`, clamped for the loglinear kind.
///
/// Returns the clamped pair and whether the clamp was active.
pub(crate) fn clamp_probs(kind: NonlinearityKind, pa: f64, pb: f64) -> (f64, f64, bool) {
    if kind == NonlinearityKind::Loglinear && (pa < PROB_FLOOR || pb < PROB_FLOOR) {
        (pa.max(PROB_FLOOR), pb.max(PROB_FLOOR), true)
    } else {
        (pa, pb, false)
    }
}

/// `f` values at the per-site probabilities plus the critical coupling, from
/// the subspace probabilities `pa = |alpha|^2` and `pb = |beta|^2`.
pub(crate) fn coupling(problem: &SearchProblem, pa: f64, pb: f64) -> Result<(NonlinearEval, f64)> {
    let (n, k) = (problem.n_f64(), problem.k_f64());
    let ev = NonlinearEval::at_site_probs(problem.kind, pa / k, pb / (n - k))?;
    let factor = 1.0 + problem.g * ev.difference();
    if factor <= 0.0 {
        return Err(Error::NonPhysical { x: pa, value: factor });
    }
    Ok((ev, factor / n))
}

/// Solution of the reduced dynamics with dense output.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub problem: SearchProblem,
    solution: DenseSolution,
    /// Set when the loglinear probability clamp engaged during integration.
    pub clamped: bool,
}

impl Trajectory {
    pub fn t_end(&self) -> f64 {
        self.solution.t_end()
    }

    pub fn dense(&self) -> &DenseSolution {
        &self.solution
    }

    /// States at the accepted integrator steps.
    pub fn samples(&self) -> Vec<ReducedState> {
        self.solution
            .times()
            .iter()
            .enumerate()
            .map(|(i, &t)| ReducedState::from_slice(t, self.solution.state(i)))
            .collect()
    }

    pub fn state_at(&self, t: f64) -> ReducedState {
        let mut y = [0.0; 5];
        self.solution.eval_into(t, &mut y);
        ReducedState::from_slice(t, &y)
    }

    pub fn x_at(&self, t: f64) -> f64 {
        self.state_at(t).x()
    }

    /// `(t, x(t))` on `points` evenly spaced times covering `[0, t_end]`.
    pub fn sample_uniform(&self, points: usize) -> Vec<(f64, f64)> {
        let points = points.max(2);
        let t_end = self.t_end();
        (0..points)
            .map(|i| {
                let t = t_end * i as f64 / (points - 1) as f64;
                (t, self.x_at(t))
            })
            .collect()
    }

    /// Largest deviation of `|alpha|^2 + |beta|^2` from 1 over the accepted steps.
    pub fn max_norm_drift(&self) -> f64 {
        self.samples().iter().map(|s| (s.norm_sqr() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Integrates the reduced dynamics over `[0, t_end]` with relative tolerance `tol`.
pub fn integrate_reduced(problem: &SearchProblem, t_end: f64, tol: f64) -> Result<Trajectory> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    integrate_reduced_with(problem, t_end, &IntegratorOptions::with_tol(tol))
}

pub fn integrate_reduced_with(
    problem: &SearchProblem,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    problem.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return domain(format!("t_end must be positive and finite, got {t_end}"));
    }
    let (n, k, g) = (problem.n_f64(), problem.k_f64(), problem.g);
    let off = (k * (n - k)).sqrt();
    let mut clamped = false;

    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (ar, ai, br, bi) = (y[0], y[1], y[2], y[3]);
        let (pa, pb, hit) = clamp_probs(problem.kind, ar * ar + ai * ai, br * br + bi * bi);
        clamped |= hit;
        let (ev, gamma) = coupling(problem, pa, pb)?;
        let daa = gamma * k + 1.0 + g * ev.f_alpha;
        let dbb = gamma * (n - k) + g * ev.f_beta;
        let c = gamma * off;
        // The common diagonal part only rotates the global phase. It is moved
        // into y[4] so the amplitudes oscillate slowly and the norm holds.
        let shift = 0.5 * (daa + dbb);
        let (daa, dbb) = (daa - shift, dbb - shift);
        // d/dt (alpha, beta) = i M (alpha, beta)
        let (ur, ui) = (daa * ar + c * br, daa * ai + c * bi);
        let (vr, vi) = (c * ar + dbb * br, c * ai + dbb * bi);
        dy[0] = -ui;
        dy[1] = ur;
        dy[2] = -vi;
        dy[3] = vr;
        dy[4] = shift;
        Ok(())
    };

    let s0 = ReducedState::initial(problem);
    let y0 = [s0.alpha.re, s0.alpha.im, s0.beta.re, s0.beta.im, 0.0];
    let solution = dopri::integrate(rhs, 0.0, &y0, t_end, opts)?;
    Ok(Trajectory { problem: *problem, solution, clamped })
}
