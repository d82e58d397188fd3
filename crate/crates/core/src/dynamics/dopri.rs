//! Dormand-Prince 5(4) with PI step control and the pair's continuous extension.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step; `None` lets the controller choose freely.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_max: None, max_steps: 2_000_000 }
    }
}

impl IntegratorOptions {
    /// Relative tolerance `tol`, absolute tolerance `tol / 100`.
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol * 1e-2, ..Self::default() }
    }
}

/// Accepted steps of one integration, each carrying its interpolation polynomial.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    dim: usize,
    /// Start time of every accepted step, followed by the final time.
    times: Vec<f64>,
    /// State at every entry of `times`.
    states: Vec<f64>,
    /// Five coefficient vectors per step.
    coeffs: Vec<f64>,
    pub rhs_evaluations: usize,
    pub rejected_steps: usize,
}

impl DenseSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn step_count(&self) -> usize {
        self.times.len() - 1
    }

    /// Node times (step boundaries), strictly increasing.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    /// Interpolated state at `t`, clamped to the integration interval.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let t = t.clamp(self.t_start(), self.t_end());
        let steps = self.step_count();
        let i = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            p => (p - 1).min(steps - 1),
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let theta = (t - t0) / (t1 - t0);
        let theta1 = 1.0 - theta;
        let d = self.dim;
        let c = &self.coeffs[i * 5 * d..(i + 1) * 5 * d];
        for j in 0..d {
            out[j] = c[j]
                + theta
                    * (c[d + j]
                        + theta1 * (c[2 * d + j] + theta * (c[3 * d + j] + theta1 * c[4 * d + j])));
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }
}

fn error_norm(err: &[f64], y0: &[f64], y1: &[f64], opts: &IntegratorOptions) -> f64 {
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = opts.atol + opts.rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / err.len() as f64).sqrt()
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end`.
///
/// `rhs` writes the derivative into its third argument and may fail; the first
/// failure aborts the integration.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<DenseSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let d = y0.len();
    let span = t_end - t0;
    assert!(span > 0.0, "integration interval must be positive");
    let h_max = opts.h_max.unwrap_or(span).min(span);

    let mut sol = DenseSolution {
        dim: d,
        times: vec![t0],
        states: y0.to_vec(),
        coeffs: Vec::new(),
        rhs_evaluations: 0,
        rejected_steps: 0,
    };

    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; d];
    let mut k2 = vec![0.0; d];
    let mut k3 = vec![0.0; d];
    let mut k4 = vec![0.0; d];
    let mut k5 = vec![0.0; d];
    let mut k6 = vec![0.0; d];
    let mut k7 = vec![0.0; d];
    let mut ytmp = vec![0.0; d];
    let mut ynew = vec![0.0; d];
    let mut err = vec![0.0; d];

    rhs(t0, &y, &mut k1)?;
    sol.rhs_evaluations += 1;

    // Initial step guess (Hairer, Norsett & Wanner, II.4).
    let mut h = {
        let sc = |v: f64| opts.atol + opts.rtol * v.abs();
        let d0 = (y.iter().map(|v| (v / sc(*v)).powi(2)).sum::<f64>() / d as f64).sqrt();
        let d1 = (k1.iter().zip(&y).map(|(f, v)| (f / sc(*v)).powi(2)).sum::<f64>() / d as f64)
            .sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(h_max);
        for j in 0..d {
            ytmp[j] = y[j] + h0 * k1[j];
        }
        rhs(t0 + h0, &ytmp, &mut k2)?;
        sol.rhs_evaluations += 1;
        let d2 = (k2
            .iter()
            .zip(&k1)
            .zip(&y)
            .map(|((a, b), v)| ((a - b) / sc(*v)).powi(2))
            .sum::<f64>()
            / d as f64)
            .sqrt()
            / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(h_max)
    };

    const SAFE: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO1: f64 = 0.2 - BETA * 0.75;
    // h_new / h stays within [FAC_MIN, FAC_MAX].
    const FAC_MIN: f64 = 0.2;
    const FAC_MAX: f64 = 10.0;
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;

    let mut t = t0;
    let mut steps = 0usize;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::TooManySteps { t, max_steps: opts.max_steps });
        }
        steps += 1;
        if t_end - t <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            *sol.times.last_mut().unwrap() = t_end;
            break;
        }
        let mut last = false;
        if t + 1.01 * h >= t_end {
            h = t_end - t;
            last = true;
        }
        if h.abs() <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h });
        }

        for j in 0..d {
            ytmp[j] = y[j] + h * A21 * k1[j];
        }
        rhs(t + C2 * h, &ytmp, &mut k2)?;
        for j in 0..d {
            ytmp[j] = y[j] + h * (A31 * k1[j] + A32 * k2[j]);
        }
        rhs(t + C3 * h, &ytmp, &mut k3)?;
        for j in 0..d {
            ytmp[j] = y[j] + h * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j]);
        }
        rhs(t + C4 * h, &ytmp, &mut k4)?;
        for j in 0..d {
            ytmp[j] = y[j] + h * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j]);
        }
        rhs(t + C5 * h, &ytmp, &mut k5)?;
        for j in 0..d {
            ytmp[j] = y[j]
                + h * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j] + A64 * k4[j] + A65 * k5[j]);
        }
        let t_new = if last { t_end } else { t + h };
        rhs(t_new, &ytmp, &mut k6)?;
        for j in 0..d {
            ynew[j] = y[j]
                + h * (A71 * k1[j] + A73 * k3[j] + A74 * k4[j] + A75 * k5[j] + A76 * k6[j]);
        }
        rhs(t_new, &ynew, &mut k7)?;
        sol.rhs_evaluations += 6;

        for j in 0..d {
            err[j] = h
                * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]);
        }
        let en = error_norm(&err, &y, &ynew, opts);

        let fac11 = en.powf(EXPO1);
        let mut fac = fac11 / fac_old.powf(BETA);
        fac = (fac / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        let mut h_new = h / fac;

        if en <= 1.0 {
            fac_old = en.max(1e-4);
            // Dense output coefficients for this step.
            let base = sol.coeffs.len();
            sol.coeffs.resize(base + 5 * d, 0.0);
            let c = &mut sol.coeffs[base..];
            for j in 0..d {
                let ydiff = ynew[j] - y[j];
                let bspl = h * k1[j] - ydiff;
                c[j] = y[j];
                c[d + j] = ydiff;
                c[2 * d + j] = bspl;
                c[3 * d + j] = ydiff - h * k7[j] - bspl;
                c[4 * d + j] = h
                    * (D1 * k1[j] + D3 * k3[j] + D4 * k4[j] + D5 * k5[j] + D6 * k6[j]
                        + D7 * k7[j]);
            }
            std::mem::swap(&mut k1, &mut k7);
            std::mem::swap(&mut y, &mut ynew);
            t = t_new;
            sol.times.push(t);
            sol.states.extend_from_slice(&y);
            if h_new.abs() > h_max {
                h_new = h_max;
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
        } else {
            h_new = h / (fac11 / SAFE).min(1.0 / FAC_MIN);
            last_rejected = true;
            sol.rejected_steps += 1;
        }
        h = h_new;
    }
    Ok(sol)
}
