//! Run configuration, parameter rules and sweeps.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use nlsearch_core::NonlinearityKind;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Runtime,
    Width,
    Bounds,
    Scaling,
    Fit,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

/// Coupling as a function of `N` and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GRule {
    Const(f64),
    /// `N^e`
    Pow(f64),
    /// `R^e / log R` with `R = N/k`
    PowOverLogR(f64),
    /// `N^e / log(N/k)`
    PowOverLogNk(f64),
}

impl GRule {
    pub fn eval(&self, n: u64, k: u64) -> Result<f64, CliError> {
        let (nf, kf) = (n as f64, k as f64);
        let r = nf / kf;
        let g = match *self {
            GRule::Const(v) => v,
            GRule::Pow(e) => nf.powf(e),
            GRule::PowOverLogR(e) => r.powf(e) / r.ln(),
            GRule::PowOverLogNk(e) => nf.powf(e) / r.ln(),
        };
        if g.is_finite() && g >= 0.0 {
            Ok(g)
        } else {
            Err(CliError::Domain(format!("g rule `{self}` gives {g} at N = {n}, k = {k}")))
        }
    }
}

fn parse_real(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Domain(format!("cannot parse {what} `{s}`")))
}

/// Accepts `a/b` as well as decimals, so `pow:1/8` works.
fn parse_exponent(s: &str) -> Result<f64, CliError> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse_real(b, "exponent")?;
            if d == 0.0 {
                return Err(CliError::Domain(format!("zero denominator in `{s}`")));
            }
            Ok(parse_real(a, "exponent")? / d)
        }
        None => parse_real(s, "exponent"),
    }
}

impl FromStr for GRule {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, arg) = s.split_once(':').unwrap_or(("const", s));
        let rule = match name.trim() {
            "const" => GRule::Const(parse_real(arg, "g")?),
            "pow" => GRule::Pow(parse_exponent(arg)?),
            "pow_over_logR" => GRule::PowOverLogR(parse_exponent(arg)?),
            "pow_over_logNk" => GRule::PowOverLogNk(parse_exponent(arg)?),
            other => return Err(CliError::Domain(format!("unknown g rule `{other}`"))),
        };
        if let GRule::Const(v) = rule {
            if v < 0.0 {
                return Err(CliError::Domain(format!("g must be non-negative, got {v}")));
            }
        }
        Ok(rule)
    }
}

impl fmt::Display for GRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{:?}` on f64 prints the shortest string that parses back exactly
        match self {
            GRule::Const(v) => write!(f, "const:{v:?}"),
            GRule::Pow(e) => write!(f, "pow:{e:?}"),
            GRule::PowOverLogR(e) => write!(f, "pow_over_logR:{e:?}"),
            GRule::PowOverLogNk(e) => write!(f, "pow_over_logNk:{e:?}"),
        }
    }
}

impl TryFrom<String> for GRule {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self, CliError> {
        s.parse()
    }
}

impl From<GRule> for String {
    fn from(r: GRule) -> String {
        r.to_string()
    }
}

/// Number of marked items as a function of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum KRule {
    Const(u64),
    /// `ceil(N^e)`
    CeilPow(f64),
}

impl KRule {
    pub fn eval(&self, n: u64) -> u64 {
        match *self {
            KRule::Const(k) => k,
            KRule::CeilPow(e) => (n as f64).powf(e).ceil() as u64,
        }
    }
}

impl FromStr for KRule {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, arg) = s.split_once(':').unwrap_or(("const", s));
        match name.trim() {
            "const" => arg
                .trim()
                .parse::<u64>()
                .map(KRule::Const)
                .map_err(|_| CliError::Domain(format!("cannot parse k `{arg}`"))),
            "ceil_pow" => Ok(KRule::CeilPow(parse_exponent(arg)?)),
            other => Err(CliError::Domain(format!("unknown k rule `{other}`"))),
        }
    }
}

impl fmt::Display for KRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRule::Const(k) => write!(f, "const:{k}"),
            KRule::CeilPow(e) => write!(f, "ceil_pow:{e:?}"),
        }
    }
}

impl TryFrom<String> for KRule {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self, CliError> {
        s.parse()
    }
}

impl From<KRule> for String {
    fn from(r: KRule) -> String {
        r.to_string()
    }
}

/// Inclusive `start:end:step` range of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Sweep {
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

impl Sweep {
    pub fn values(&self) -> Vec<u64> {
        (self.start..=self.end).step_by(self.step as usize).collect()
    }
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Domain(format!("sweep must be start:end:step with start <= end and step > 0, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<u64> = parts
            .iter()
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let sweep = Sweep { start: nums[0], end: nums[1], step: nums[2] };
        if sweep.step == 0 || sweep.start > sweep.end {
            return Err(bad());
        }
        Ok(sweep)
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.step)
    }
}

impl TryFrom<String> for Sweep {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self, CliError> {
        s.parse()
    }
}

impl From<Sweep> for String {
    fn from(s: Sweep) -> String {
        s.to_string()
    }
}

/// Everything needed to re-run a command. Embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: u64,
    pub g: GRule,
    pub kind: NonlinearityKind,
    pub epsilon: f64,
    pub tol: f64,
    pub sweep: Option<Sweep>,
    pub k_rule: Option<KRule>,
    pub t_end: Option<f64>,
    pub points: usize,
    /// Overlay the Figure 2 layout instead of a single run.
    pub overlay: bool,
    pub figure: Option<u8>,
    pub kappa: Option<String>,
    pub lambda: Option<String>,
    pub sigma: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            n: 100,
            k: 1,
            g: GRule::Const(0.0),
            kind: NonlinearityKind::Cubic,
            epsilon: nlsearch_core::analytics::DEFAULT_EPSILON,
            tol: 1e-10,
            sweep: None,
            k_rule: None,
            t_end: None,
            points: 1001,
            overlay: false,
            figure: None,
            kappa: None,
            lambda: None,
            sigma: None,
            out: None,
            format: if command == Command::Scaling { Format::Json } else { Format::Csv },
        }
    }

    /// `(N, k, g)` for every run, ordered by `N`.
    pub fn instances(&self) -> Result<Vec<(u64, u64, f64)>, CliError> {
        let ns = match self.sweep {
            Some(s) => s.values(),
            None => vec![self.n],
        };
        ns.into_iter()
            .map(|n| {
                let k = match self.k_rule {
                    Some(rule) if self.sweep.is_some() => rule.eval(n),
                    _ => self.k,
                };
                Ok((n, k, self.g.eval(n, k)?))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_rules_parse_and_print() {
        for s in ["const:2.5", "pow:0.5", "pow_over_logR:0.25", "pow_over_logNk:0.125"] {
            let r: GRule = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("3".parse::<GRule>().unwrap(), GRule::Const(3.0));
        assert_eq!("pow:1/8".parse::<GRule>().unwrap(), GRule::Pow(0.125));
        assert!("const:-1".parse::<GRule>().is_err());
        assert!("sqrt:2".parse::<GRule>().is_err());
    }

    #[test]
    fn g_rule_values() {
        let g = GRule::PowOverLogNk(0.125).eval(1_000_000, 32).unwrap();
        assert_eq!(g, 1e6f64.powf(0.125) / (1e6f64 / 32.0).ln());
        assert_eq!(GRule::Pow(1.0).eval(100, 1).unwrap(), 100.0);
        assert!(GRule::PowOverLogR(0.5).eval(4, 4).is_err());
    }

    #[test]
    fn k_rules() {
        assert_eq!("ceil_pow:1/4".parse::<KRule>().unwrap().eval(1_000_000), 32);
        assert_eq!("5".parse::<KRule>().unwrap(), KRule::Const(5));
        assert!("floor:2".parse::<KRule>().is_err());
    }

    #[test]
    fn sweeps() {
        let s: Sweep = "500000:1000000:10000".parse().unwrap();
        assert_eq!(s.values().len(), 51);
        assert!("5:1:1".parse::<Sweep>().is_err());
        assert!("1:5:0".parse::<Sweep>().is_err());
        assert!("1:5".parse::<Sweep>().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let mut c = RunConfig::new(Command::Fit);
        c.g = GRule::PowOverLogNk(0.1);
        c.sweep = Some("10:20:5".parse().unwrap());
        c.k_rule = Some(KRule::CeilPow(0.25));
        c.tol = 1.0 / 3.0;
        let s = serde_json::to_string(&c).unwrap();
        assert!(!s.contains('\n'));
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
