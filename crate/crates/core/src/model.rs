//! Search instances, the self-potential nonlinearities and the critical coupling.
//!
//! A search over `N` items with `k` marked stays in the two-dimensional subspace
//! spanned by the uniform marked and uniform unmarked states. Every marked site
//! then carries probability `x / k` and every unmarked site `(1 - x) / (N - k)`,
//! where `x` is the success probability. The nonlinearity enters only through
//! `f` evaluated at those two per-site probabilities.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Smallest subspace probability fed into `f` by the integrators.
///
/// The loglinear potential diverges as a subspace empties; integrators clamp
/// the subspace probability to this floor and flag the event.
pub const PROB_FLOOR: f64 = 1e-14;

/// A real function `f(p)` of a site probability, with its derivative.
pub trait Nonlinearity {
    fn value(&self, p: f64) -> Result<f64>;
    fn derivative(&self, p: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearityKind {
    /// `f(p) = p` (Gross-Pitaevskii).
    Cubic,
    /// `f(p) = p - p^2`.
    #[serde(rename = "cq")]
    CubicQuintic,
    /// `f(p) = log p`.
    #[serde(rename = "log")]
    Loglinear,
}

impl NonlinearityKind {
    pub const ALL: [NonlinearityKind; 3] = [Self::Cubic, Self::CubicQuintic, Self::Loglinear];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cubic => "cubic",
            Self::CubicQuintic => "cq",
            Self::Loglinear => "log",
        }
    }
}

impl fmt::Display for NonlinearityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NonlinearityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cubic" => Ok(Self::Cubic),
            "cq" | "cubic-quintic" | "cubicquintic" => Ok(Self::CubicQuintic),
            "log" | "loglinear" => Ok(Self::Loglinear),
            other => domain(format!("unknown nonlinearity kind `{other}`")),
        }
    }
}

impl Nonlinearity for NonlinearityKind {
    fn value(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 0.0 {
            return domain(format!("f({p}) undefined for negative probability"));
        }
        match self {
            Self::Cubic => Ok(p),
            Self::CubicQuintic => Ok(p - p * p),
            Self::Loglinear => {
                if p <= 0.0 {
                    domain("log nonlinearity undefined at p = 0")
                } else {
                    Ok(p.ln())
                }
            }
        }
    }

    fn derivative(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p <= 0.0 {
            return domain(format!("f'({p}) requires p > 0"));
        }
        Ok(match self {
            Self::Cubic => 1.0,
            Self::CubicQuintic => 1.0 - 2.0 * p,
            Self::Loglinear => 1.0 / p,
        })
    }
}

/// `f(p)` for the given kind.
pub fn nonlinearity_eval(kind: NonlinearityKind, p: f64) -> Result<f64> {
    kind.value(p)
}

/// `f'(p)` for the given kind.
pub fn nonlinearity_deriv(kind: NonlinearityKind, p: f64) -> Result<f64> {
    kind.derivative(p)
}

/// One search instance: `k` marked items among `n`, coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub n: u64,
    pub k: u64,
    pub g: f64,
    pub kind: NonlinearityKind,
}

impl SearchProblem {
    pub fn new(n: u64, k: u64, g: f64, kind: NonlinearityKind) -> Result<Self> {
        let p = Self { n, k, g, kind };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.n {
            return domain(format!("need 1 <= k < N, got N = {}, k = {}", self.n, self.k));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return domain(format!("need finite g >= 0, got {}", self.g));
        }
        Ok(())
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    pub fn k_f64(&self) -> f64 {
        self.k as f64
    }

    /// Initial success probability `k / N` of the uniform superposition.
    pub fn x0(&self) -> f64 {
        self.k_f64() / self.n_f64()
    }

    /// `R = N / k`.
    pub fn ratio(&self) -> f64 {
        self.n_f64() / self.k_f64()
    }

    /// `f_alpha`, `f_beta` and their derivatives at success probability `x`.
    pub fn eval_at(&self, x: f64) -> Result<NonlinearEval> {
        self.eval_split(x, 1.0 - x)
    }

    /// Like [`eval_at`](Self::eval_at) with `1 - x` supplied separately, for
    /// callers that know it without cancellation.
    pub fn eval_split(&self, x: f64, one_minus_x: f64) -> Result<NonlinearEval> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&one_minus_x) {
            return domain(format!("success probability {x} outside [0, 1]"));
        }
        if self.kind == NonlinearityKind::Loglinear && (x <= 0.0 || one_minus_x <= 0.0) {
            return domain(format!("log nonlinearity undefined at x = {x}"));
        }
        let pa = x / self.k_f64();
        let pb = one_minus_x / (self.n - self.k) as f64;
        NonlinearEval::at_site_probs(self.kind, pa, pb)
    }

    /// `1 + g (f_alpha - f_beta)` at `x`.
    pub fn speedup_factor(&self, x: f64) -> Result<f64> {
        Ok(1.0 + self.g * self.eval_at(x)?.difference())
    }

    /// Critical coupling `gamma_c = (1/N) [1 + g (f_alpha - f_beta)]`.
    pub fn critical_gamma(&self, x: f64) -> Result<f64> {
        let factor = self.speedup_factor(x)?;
        if factor <= 0.0 {
            return Err(Error::NonPhysical { x, value: factor });
        }
        Ok(factor / self.n_f64())
    }
}

/// Free-function form of [`SearchProblem::eval_at`].
pub fn eval_at(problem: &SearchProblem, x: f64) -> Result<NonlinearEval> {
    problem.eval_at(x)
}

/// Free-function form of [`SearchProblem::critical_gamma`].
pub fn critical_gamma(problem: &SearchProblem, x: f64) -> Result<f64> {
    problem.critical_gamma(x)
}

/// The nonlinearity and its derivative at the marked and unmarked site probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearEval {
    pub f_alpha: f64,
    pub f_beta: f64,
    pub fp_alpha: f64,
    pub fp_beta: f64,
}

impl NonlinearEval {
    pub fn at_site_probs(kind: NonlinearityKind, pa: f64, pb: f64) -> Result<Self> {
        // f' is only needed away from empty subspaces; report NaN instead of failing.
        let deriv = |p: f64| kind.derivative(p).unwrap_or(f64::NAN);
        Ok(Self {
            f_alpha: kind.value(pa)?,
            f_beta: kind.value(pb)?,
            fp_alpha: deriv(pa),
            fp_beta: deriv(pb),
        })
    }

    pub fn difference(&self) -> f64 {
        self.f_alpha - self.f_beta
    }
}
