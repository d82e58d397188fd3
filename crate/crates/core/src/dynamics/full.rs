use num_complex::Complex64;

use super::dopri::{self, DenseSolution, IntegratorOptions};
use super::{clamp_probs, coupling};
use crate::error::{domain, Result};
use crate::model::{Nonlinearity, SearchProblem};

/// Largest database simulated in the full space.
pub const MAX_FULL_N: u64 = 64;

/// All `N` amplitudes at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub t: f64,
    pub amplitudes: Vec<Complex64>,
    pub marked: Vec<usize>,
}

impl FullState {
    pub fn marked_probability(&self) -> f64 {
        self.marked.iter().map(|&i| self.amplitudes[i].norm_sqr()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Root-mean-square spread of the amplitudes within the marked set and
    /// within the unmarked set. Both vanish for states in the two-dimensional
    /// search subspace.
    pub fn subspace_spread(&self) -> (f64, f64) {
        let mut is_marked = vec![false; self.amplitudes.len()];
        for &i in &self.marked {
            is_marked[i] = true;
        }
        let spread = |sel: bool| {
            let group: Vec<Complex64> = self
                .amplitudes
                .iter()
                .zip(&is_marked)
                .filter(|(_, &m)| m == sel)
                .map(|(a, _)| *a)
                .collect();
            let len = group.len() as f64;
            let mean = group.iter().sum::<Complex64>() / len;
            (group.iter().map(|a| (a - mean).norm_sqr()).sum::<f64>() / len).sqrt()
        };
        (spread(true), spread(false))
    }
}

#[derive(Debug, Clone)]
pub struct FullTrajectory {
    pub problem: SearchProblem,
    pub marked: Vec<usize>,
    solution: DenseSolution,
    pub clamped: bool,
}

impl FullTrajectory {
    pub fn t_end(&self) -> f64 {
        self.solution.t_end()
    }

    pub fn dense(&self) -> &DenseSolution {
        &self.solution
    }

    fn to_state(&self, t: f64, y: &[f64]) -> FullState {
        FullState {
            t,
            amplitudes: y.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect(),
            marked: self.marked.clone(),
        }
    }

    pub fn state_at(&self, t: f64) -> FullState {
        self.to_state(t, &self.solution.eval(t))
    }

    pub fn samples(&self) -> Vec<FullState> {
        self.solution
            .times()
            .iter()
            .enumerate()
            .map(|(i, &t)| self.to_state(t, self.solution.state(i)))
            .collect()
    }

    pub fn marked_probability_at(&self, t: f64) -> f64 {
        self.state_at(t).marked_probability()
    }
}

/// Marked indices spread evenly over `0..n`.
pub fn default_marked(n: u64, k: u64) -> Vec<usize> {
    (0..k).map(|j| (j * n / k) as usize).collect()
}

/// Integrates `i dpsi/dt = [H0 - V(t)] psi` in the full space, `N <= 64`.
pub fn integrate_full(problem: &SearchProblem, t_end: f64, tol: f64) -> Result<FullTrajectory> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let marked = default_marked(problem.n, problem.k);
    integrate_full_with(problem, &marked, t_end, &IntegratorOptions::with_tol(tol))
}

pub fn integrate_full_with(
    problem: &SearchProblem,
    marked: &[usize],
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<FullTrajectory> {
    problem.validate()?;
    if problem.n > MAX_FULL_N {
        return domain(format!("full-space simulation limited to N <= {MAX_FULL_N}"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return domain(format!("t_end must be positive and finite, got {t_end}"));
    }
    let n = problem.n as usize;
    let mut is_marked = vec![false; n];
    for &i in marked {
        if i >= n || is_marked[i] {
            return domain(format!("invalid marked index {i}"));
        }
        is_marked[i] = true;
    }
    if marked.len() as u64 != problem.k {
        return domain(format!("expected {} marked indices, got {}", problem.k, marked.len()));
    }

    let (nf, kf, g) = (problem.n_f64(), problem.k_f64(), problem.g);
    let kind = problem.kind;
    let mut clamped = false;

    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (mut pa, mut pb) = (0.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for (i, c) in y.chunks_exact(2).enumerate() {
            let p = c[0] * c[0] + c[1] * c[1];
            if is_marked[i] {
                pa += p;
            } else {
                pb += p;
            }
            total += Complex64::new(c[0], c[1]);
        }
        let (pa, pb, hit) = clamp_probs(kind, pa, pb);
        clamped |= hit;
        let (_, gamma) = coupling(problem, pa, pb)?;
        let walk = gamma * total;
        for (i, (c, d)) in y.chunks_exact(2).zip(dy.chunks_exact_mut(2)).enumerate() {
            let amp = Complex64::new(c[0], c[1]);
            let floor = if is_marked[i] { pa / kf } else { pb / (nf - kf) };
            let site = if hit { (amp.norm_sqr()).max(floor) } else { amp.norm_sqr() };
            let mut diag = g * kind.value(site)?;
            if is_marked[i] {
                diag += 1.0;
            }
            // dpsi_i/dt = i [gamma sum_j psi_j + (1_M + g f(|psi_i|^2)) psi_i]
            let v = walk + diag * amp;
            d[0] = -v.im;
            d[1] = v.re;
        }
        Ok(())
    };

    let amp0 = 1.0 / nf.sqrt();
    let y0: Vec<f64> = (0..n).flat_map(|_| [amp0, 0.0]).collect();
    let solution = dopri::integrate(rhs, 0.0, &y0, t_end, opts)?;
    Ok(FullTrajectory { problem: *problem, marked: marked.to_vec(), solution, clamped })
}
