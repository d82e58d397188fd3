//! Asymptotic orders `N^a R^b (log N)^c` with exact rational exponents.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{domain, Result};

pub type Exponent = Ratio<i64>;

pub fn ratio(n: i64, d: i64) -> Exponent {
    Ratio::new(n, d)
}

/// Parses `"3/4"`, `"-1"`, `"0.25"` or `"1e-1"`-free decimals into an exact rational.
pub fn parse_exponent(s: &str) -> Result<Exponent> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d) = (n.trim().parse::<i64>(), d.trim().parse::<i64>());
        return match (n, d) {
            (Ok(n), Ok(d)) if d != 0 => Ok(Ratio::new(n, d)),
            _ => domain(format!("cannot parse exponent '{s}'")),
        };
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 12
    {
        return domain(format!("cannot parse exponent '{s}'"));
    }
    let denom = 10i64.pow(frac.len() as u32);
    let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| crate::Error::Domain(format!("exponent '{s}' out of range")))? };
    let part: i64 = if frac.is_empty() { 0 } else { frac.parse().unwrap() };
    let v = Ratio::new(whole * denom + part, denom);
    Ok(if neg { -v } else { v })
}

fn fmt_power(f: &mut fmt::Formatter<'_>, base: &str, e: Exponent) -> fmt::Result {
    if e == Exponent::from_integer(1) {
        write!(f, "{base}")
    } else if e.is_integer() {
        write!(f, "{base}^{}", e.numer())
    } else {
        write!(f, "{base}^{{{}/{}}}", e.numer(), e.denom())
    }
}

pub(crate) fn serialize_exponent<S: Serializer>(e: &Exponent, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exponent_text(*e))
}

pub(crate) fn serialize_opt_exponent<S: Serializer>(
    e: &Option<Exponent>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.serialize_str(&exponent_text(*e)),
        None => s.serialize_none(),
    }
}

pub fn exponent_text(e: Exponent) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// `N^n R^r (log N)^log`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub n: Exponent,
    pub r: Exponent,
    pub log: i32,
}

impl Monomial {
    pub fn one() -> Self {
        Self { n: Exponent::zero(), r: Exponent::zero(), log: 0 }
    }

    pub fn n_pow(e: Exponent) -> Self {
        Self { n: e, ..Self::one() }
    }

    pub fn r_pow(e: Exponent) -> Self {
        Self { r: e, ..Self::one() }
    }

    pub fn log_n() -> Self {
        Self { log: 1, ..Self::one() }
    }

    pub fn recip(self) -> Self {
        Self { n: -self.n, r: -self.r, log: -self.log }
    }

    pub fn pow(self, e: i32) -> Self {
        let k = Exponent::from_integer(e as i64);
        Self { n: self.n * k, r: self.r * k, log: self.log * e }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Growth ordering: powers of `N` first, then `R`, then `log N`.
    ///
    /// Sound whenever the compared monomials differ in one variable only,
    /// which holds for every sum formed by the calculators.
    pub fn growth_cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then(self.r.cmp(&other.r)).then(self.log.cmp(&other.log))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        Monomial { n: self.n + o.n, r: self.r + o.r, log: self.log + o.log }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (base, e) in [("N", self.n), ("R", self.r)] {
            if e.is_positive() {
                num.push((base, e));
            } else if e.is_negative() {
                den.push((base, -e));
            }
        }
        let log = Exponent::from_integer(self.log.abs() as i64);
        if self.log > 0 {
            num.push(("log N", log));
        } else if self.log < 0 {
            den.push(("log N", log));
        }
        let write_side = |f: &mut fmt::Formatter<'_>, side: &[(&str, Exponent)]| -> fmt::Result {
            for (i, (base, e)) in side.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                if *base == "log N" && *e != Exponent::from_integer(1) {
                    write!(f, "log^{} N", e.numer())?;
                } else {
                    fmt_power(f, base, *e)?;
                }
            }
            Ok(())
        };
        if num.is_empty() {
            write!(f, "1")?;
        } else {
            write_side(f, &num)?;
        }
        if !den.is_empty() {
            write!(f, "/")?;
            if den.len() > 1 {
                write!(f, "(")?;
                write_side(f, &den)?;
                write!(f, ")")?;
            } else {
                write_side(f, &den)?;
            }
        }
        Ok(())
    }
}

/// A sum of monomials, kept with its dominant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    terms: Vec<Monomial>,
}

impl Order {
    pub fn new(m: Monomial) -> Self {
        Self { terms: vec![m] }
    }

    pub fn sum(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut v: Vec<Monomial> = Vec::new();
        for t in terms {
            if !v.contains(&t) {
                v.push(t);
            }
        }
        assert!(!v.is_empty(), "an order needs at least one term");
        Self { terms: v }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn dominant(&self) -> Monomial {
        *self.terms.iter().max_by(|a, b| a.growth_cmp(b)).unwrap()
    }

    /// Keeps only the dominant term.
    pub fn simplify(&self) -> Self {
        Self::new(self.dominant())
    }

    pub fn times(&self, m: Monomial) -> Self {
        Self::sum(self.terms.iter().map(|&t| t * m))
    }
}

impl From<Monomial> for Order {
    fn from(m: Monomial) -> Self {
        Self::new(m)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Lower and upper asymptotic estimates; equal when the order is tight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Estimate {
    pub lower: Order,
    pub upper: Order,
}

impl Estimate {
    pub fn exact(o: impl Into<Order>) -> Self {
        let o = o.into();
        Self { lower: o.clone(), upper: o }
    }

    pub fn between(lower: impl Into<Order>, upper: impl Into<Order>) -> Self {
        Self { lower: lower.into(), upper: upper.into() }
    }

    pub fn is_tight(&self) -> bool {
        self.lower == self.upper
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_tight() {
            write!(f, "{}", self.upper)
        } else {
            write!(f, "[{}, {}]", self.lower, self.upper)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_exponent("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_exponent("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_exponent("-1").unwrap(), ratio(-1, 1));
        assert_eq!(parse_exponent("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_exponent(" 1 / 8 ").unwrap(), ratio(1, 8));
        assert!(parse_exponent("1/0").is_err());
        assert!(parse_exponent("abc").is_err());
        assert!(parse_exponent("").is_err());
    }

    #[test]
    fn display() {
        let m = Monomial::n_pow(ratio(1, 1)) * Monomial::log_n().recip();
        assert_eq!(m.to_string(), "N/log N");
        let m = Monomial::r_pow(ratio(1, 4)) * Monomial::log_n();
        assert_eq!(m.to_string(), "R^{1/4} log N");
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(Monomial::n_pow(ratio(-1, 2)).to_string(), "1/N^{1/2}");
        assert_eq!(Monomial::log_n().pow(2).to_string(), "log^2 N");
        let o = Order::sum([Monomial::r_pow(ratio(0, 1)), Monomial::log_n()]);
        assert_eq!(o.to_string(), "1 + log N");
        assert_eq!(o.dominant(), Monomial::log_n());
    }

    #[test]
    fn dominance() {
        let a = Monomial::n_pow(ratio(1, 100));
        assert_eq!(a.growth_cmp(&Monomial::log_n()), Ordering::Greater);
        assert_eq!(Monomial::one().growth_cmp(&Monomial::log_n()), Ordering::Less);
        assert_eq!(Monomial::n_pow(ratio(-1, 2)).growth_cmp(&Monomial::one()), Ordering::Less);
    }
}
