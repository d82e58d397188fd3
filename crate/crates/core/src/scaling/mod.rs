//! Asymptotic resource scaling with `g = O(N^kappa)`, `k = O(N^lambda)`, or
//! for the loglinear case `g = O(R^sigma / log R)` with `R = N/k`.
//!
//! Every quantity is derived from the runtime and the leading-order width:
//! clock ions scale as `1/width`, space `S` adds `log N` qubits, `ST` is their
//! product, and the particle count `N0` follows from `S T^2 = Omega(N)`.

mod fit;
mod order;

use num_traits::{Signed, Zero};
use serde::Serialize;

pub use fit::{fit_power_law, PowerLawFit};
pub use order::{exponent_text, parse_exponent, ratio, Estimate, Exponent, Monomial, Order};

use crate::error::{domain, Result};
use crate::model::NonlinearityKind;
use order::{serialize_exponent, serialize_opt_exponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScalingQuery {
    #[serde(serialize_with = "serialize_exponent")]
    pub kappa: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub lambda: Exponent,
    #[serde(serialize_with = "serialize_opt_exponent")]
    pub sigma: Option<Exponent>,
}

impl ScalingQuery {
    pub fn new(kappa: Exponent, lambda: Exponent) -> Self {
        Self { kappa, lambda, sigma: None }
    }

    pub fn loglinear(sigma: Exponent) -> Self {
        Self { kappa: Exponent::zero(), lambda: Exponent::zero(), sigma: Some(sigma) }
    }

    fn check_power(&self) -> Result<()> {
        if self.sigma.is_some() {
            return domain("sigma is only used by the loglinear calculator");
        }
        if self.lambda.is_negative() || self.lambda > Exponent::from_integer(1) {
            return domain(format!("lambda must lie in [0, 1], got {}", exponent_text(self.lambda)));
        }
        Ok(())
    }
}

/// Count of `log N` factors in the leading term of each quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogFactors {
    pub runtime: i32,
    pub width: i32,
    pub space: i32,
    pub space_time: i32,
    pub n0: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub kind: NonlinearityKind,
    pub query: ScalingQuery,
    /// `"N"`, or `"R"` for the loglinear calculator.
    pub variable: &'static str,
    /// Exponent of the upper runtime estimate.
    #[serde(serialize_with = "serialize_exponent")]
    pub t_exp: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub t_exp_lower: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub dt_exp: Exponent,
    pub runtime: Estimate,
    pub width: Estimate,
    pub clocks: Order,
    pub space: Estimate,
    pub space_terms: String,
    pub space_time: Estimate,
    pub space_time_terms: String,
    pub space_time_squared: String,
    /// `None` when `S T^2 = Omega(N)` holds for any particle count.
    pub n0: Option<Order>,
    /// `N0` as obtained from the inequality itself, where the stated bound differs.
    pub n0_derived: Option<Order>,
    /// Runtime plus required clock resolution, cubic-quintic only.
    pub joint: Option<Order>,
    pub log_factors: LogFactors,
    pub branch: String,
}

impl ScalingReport {
    pub fn s_exp(&self) -> Exponent {
        lead_exp(self.space.upper.dominant())
    }

    pub fn st_exp(&self) -> Exponent {
        lead_exp(self.space_time.upper.dominant())
    }

    pub fn n0_exp(&self) -> Option<Exponent> {
        self.n0.as_ref().map(|o| lead_exp(o.dominant()))
    }
}

fn lead_exp(m: Monomial) -> Exponent {
    m.n + m.r
}

fn half() -> Exponent {
    ratio(1, 2)
}

fn joined(o: &Order) -> String {
    o.to_string()
}

/// Quantities shared by the cubic and cubic-quintic calculators.
fn power_report(kind: NonlinearityKind, q: ScalingQuery, width: Monomial, branch: String) -> ScalingReport {
    let (kappa, lambda) = (q.kappa, q.lambda);
    // t_* ~ sqrt(N / (k + g))
    let k_plus_g = kappa.max(lambda);
    let t = Monomial::n_pow(half() - k_plus_g / 2);
    let clocks = width.recip();
    let space_sum = Order::sum([clocks, Monomial::log_n()]);
    let space = space_sum.simplify();
    let st_sum = space_sum.times(t);
    let st = st_sum.simplify();

    let t2 = t.pow(2);
    let oracle = t2 * Monomial::log_n();
    let st2 = if clocks.growth_cmp(&Monomial::log_n()).is_gt() {
        format!("{} + N0 {} = Omega(N)", clocks * t2, oracle)
    } else {
        format!("N0 {} = Omega(N)", oracle)
    };
    let n0 = Monomial::n_pow(ratio(1, 1)) * t2.recip() * Monomial::log_n().recip();

    ScalingReport {
        kind,
        query: q,
        variable: "N",
        t_exp: t.n,
        t_exp_lower: t.n,
        dt_exp: width.n,
        runtime: Estimate::exact(t),
        width: Estimate::exact(width),
        clocks: clocks.into(),
        space: Estimate::exact(space.clone()),
        space_terms: joined(&space_sum),
        space_time: Estimate::exact(st.clone()),
        space_time_terms: joined(&st_sum),
        space_time_squared: st2,
        n0: Some(n0.into()),
        n0_derived: None,
        joint: None,
        log_factors: LogFactors {
            runtime: 0,
            width: 0,
            space: space.dominant().log,
            space_time: st.dominant().log,
            n0: Some(n0.log),
        },
        branch,
    }
}

fn power_branch(q: &ScalingQuery) -> String {
    let (kappa, lambda) = (q.kappa, q.lambda);
    let first = if kappa >= lambda { "kappa >= lambda" } else { "kappa < lambda" };
    let second = if kappa >= lambda / 2 + half() {
        "kappa >= lambda/2 + 1/2"
    } else {
        "kappa < lambda/2 + 1/2"
    };
    format!("{first}; {second}")
}

/// Cubic nonlinearity, `t_* = pi sqrt(N) / (2 sqrt(k + g))`.
pub fn cubic_scaling(q: ScalingQuery) -> Result<ScalingReport> {
    q.check_power()?;
    Ok(power_report(NonlinearityKind::Cubic, q, cubic_width(q), power_branch(&q)))
}

/// `2N / (1 + g/k) sqrt(1/(kN))`.
fn cubic_width(q: ScalingQuery) -> Monomial {
    let excess = (q.kappa - q.lambda).max(Exponent::zero());
    Monomial::n_pow(half() - q.lambda / 2 - excess)
}

/// Cubic-quintic nonlinearity. The runtime order matches the cubic one; for a
/// single marked item the width keeps the linear `N^{1/2}`.
pub fn cq_scaling(q: ScalingQuery) -> Result<ScalingReport> {
    q.check_power()?;
    let single = q.lambda.is_zero();
    let width = if single { Monomial::n_pow(half()) } else { cubic_width(q) };
    let mut branch = if q.lambda <= q.kappa { "lambda <= kappa" } else { "lambda > kappa" }.to_string();
    if single {
        branch.push_str("; lambda = 0");
    }
    let mut r = power_report(NonlinearityKind::CubicQuintic, q, width, branch);
    let t = r.runtime.upper.dominant();
    r.joint = Some(Order::sum([t, width.recip()]).simplify());
    Ok(r)
}

/// Loglinear nonlinearity with `g = O(R^sigma / log R)`.
pub fn log_scaling(sigma: Exponent) -> Result<ScalingReport> {
    let q = ScalingQuery::loglinear(sigma);
    let t_lo = Monomial::r_pow(half() - sigma);
    let t_hi = Monomial::r_pow(half() - sigma / 2);
    // width >= sqrt(R) / (g log(R/eps)) ~ R^{1/2 - sigma}
    let width = Monomial::r_pow(half() - sigma);
    let clocks = width.recip();
    let space_sum = Order::sum([clocks, Monomial::log_n()]);
    let space = space_sum.simplify();
    let st_lo = space_sum.times(t_lo);
    let st_hi = space_sum.times(t_hi);
    let space_time = Estimate::between(st_lo.simplify(), st_hi.simplify());

    let s_n0 = format!("(N0 log N + {clocks})");
    let st2 = format!("{} {s_n0} <~ S T^2 <~ {} {s_n0}", t_lo.pow(2), t_hi.pow(2));
    let derived = Monomial::n_pow(ratio(1, 1)) * t_lo.pow(2).recip() * Monomial::log_n().recip();
    let (n0, branch) = if sigma > half() {
        (Some(Order::new(derived)), "sigma > 1/2")
    } else if sigma == half() {
        (Some(Order::new(Monomial::n_pow(ratio(1, 1)) * Monomial::log_n())), "sigma = 1/2")
    } else {
        (None, "sigma < 1/2")
    };
    let n0_derived = (sigma <= half()).then(|| Order::new(derived));

    Ok(ScalingReport {
        kind: NonlinearityKind::Loglinear,
        query: q,
        variable: "R",
        t_exp: t_hi.r,
        t_exp_lower: t_lo.r,
        dt_exp: width.r,
        runtime: Estimate::between(t_lo, t_hi),
        width: Estimate::exact(width),
        clocks: clocks.into(),
        space: Estimate::exact(space.clone()),
        space_terms: joined(&space_sum),
        space_time_terms: format!("[{}, {}]", st_lo, st_hi),
        space_time: space_time.clone(),
        space_time_squared: st2,
        log_factors: LogFactors {
            runtime: 0,
            width: 0,
            space: space.dominant().log,
            space_time: space_time.upper.dominant().log,
            n0: n0.as_ref().map(|o| o.dominant().log),
        },
        n0,
        n0_derived,
        joint: None,
        branch: branch.into(),
    })
}

/// Orders of the intermediate quantities in the cubic-quintic closed form,
/// as exponents of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CqTermOrders {
    #[serde(serialize_with = "serialize_exponent")]
    pub a: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub b: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub c: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub delta: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub sigma: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub xi: Exponent,
    /// `2a + b + sqrt(Delta)`
    #[serde(serialize_with = "serialize_exponent")]
    pub num_plus: Exponent,
    /// `-2a - b + sqrt(Delta)`
    #[serde(serialize_with = "serialize_exponent")]
    pub num_minus: Exponent,
    /// `xi + sqrt(Delta)(k - N)`
    #[serde(serialize_with = "serialize_exponent")]
    pub xi_plus: Exponent,
    /// `xi - sqrt(Delta)(k - N)`
    #[serde(serialize_with = "serialize_exponent")]
    pub xi_minus: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub bracket: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub sqrt_sigma_delta: Exponent,
    #[serde(serialize_with = "serialize_exponent")]
    pub runtime: Exponent,
}

/// Term-by-term orders of the closed form. `kappa` may be negative here.
///
/// Sums take the larger exponent except where leading terms cancel: for
/// `kappa >= 0`, `sqrt(Delta) ~ b`, so `sqrt(Delta) - b = -4ac/(sqrt(Delta) + b)`
/// has order `a + c - b`, and the `bN` terms of `xi + sqrt(Delta)(k - N)`
/// cancel, leaving `2 k^2 N^3`.
pub fn cq_term_orders(kappa: Exponent, lambda: Exponent) -> Result<CqTermOrders> {
    if lambda.is_negative() || lambda > Exponent::from_integer(1) {
        return domain(format!("lambda must lie in [0, 1], got {}", exponent_text(lambda)));
    }
    let int = |v: i64| Exponent::from_integer(v);
    let a = kappa + int(2);
    let b = kappa + lambda + int(2);
    let c = (kappa + lambda * 2 + int(1)).max(lambda * 2 + int(2));
    let delta = (b * 2).max(a + c);
    let sqrt_delta = delta / 2;
    let sigma = int(2) + (lambda * 2).max(kappa + lambda);
    let xi = (a + lambda).max(c + int(1)).max(b + int(1));
    let cancels = !kappa.is_negative();
    let num_plus = a.max(b).max(sqrt_delta);
    let num_minus = if cancels { a.max(a + c - b) } else { a.max(b).max(sqrt_delta) };
    let xi_plus = lambda * 2 + int(3);
    let xi_minus = xi.max(sqrt_delta + int(1));
    let bracket = (num_plus - xi_plus / 2).max(num_minus - xi_minus / 2);
    let sqrt_sigma_delta = sigma / 2 + sqrt_delta;
    // prefactor N k^2 (N-k)^2 / sqrt(k)
    let prefactor = int(3) + lambda * 3 / 2;
    let runtime = prefactor + bracket - sqrt_sigma_delta;
    Ok(CqTermOrders {
        a,
        b,
        c,
        delta,
        sigma,
        xi,
        num_plus,
        num_minus,
        xi_plus,
        xi_minus,
        bracket,
        sqrt_sigma_delta,
        runtime,
    })
}
