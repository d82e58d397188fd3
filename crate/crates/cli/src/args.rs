//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nlsearch_core::NonlinearityKind;

use crate::config::{Command, Format, GRule, KRule, RunConfig, Sweep};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "nlsearch", version, about = "Unstructured quantum search under nonlinear Schrödinger dynamics")]
pub struct Cli {
    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Cmd,
}

fn parse_kind(s: &str) -> Result<NonlinearityKind, String> {
    s.parse().map_err(|e: nlsearch_core::Error| e.to_string())
}

fn parse_with<T: std::str::FromStr<Err = CliError>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long = "N", default_value_t = 100)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// const:<v>, pow:<e>, pow_over_logR:<e> or pow_over_logNk:<e>; a bare number means const.
    #[arg(long, default_value = "const:0", value_parser = parse_with::<GRule>)]
    pub g: GRule,
    /// cubic, cq or log.
    #[arg(long, default_value = "cubic", value_parser = parse_kind)]
    pub kind: NonlinearityKind,
    /// Height offset for peak widths.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// start:end:step over N, inclusive.
    #[arg(long, value_parser = parse_with::<Sweep>)]
    pub sweep: Option<Sweep>,
    /// const:<k> or ceil_pow:<e> (k = ceil(N^e)); applies to sweeps.
    #[arg(long = "k-rule", value_parser = parse_with::<KRule>)]
    pub k_rule: Option<KRule>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to the --out extension, else csv.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Success probability over time. Columns: N,k,g,t,x
    Simulate {
        #[command(flatten)]
        common: Common,
        /// End time; defaults to twice the quadrature runtime.
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        /// Samples per trajectory.
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Overlay N in {100, 1000}, k in {1, 2} (figure 2 layout).
        #[arg(long)]
        figure: bool,
    },
    /// First-peak runtime. Columns: N,k,g,runtime,closed_form,lower,upper
    Runtime {
        #[command(flatten)]
        common: Common,
    },
    /// Peak width above 1 - eps. Columns: N,k,g,quadrature,exact,leading_order,bound,measured
    Width {
        #[command(flatten)]
        common: Common,
    },
    /// Loglinear bound integrands over x. Columns: x,original,lower,upper_loose,upper,log_exact,log_linear
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Interior grid points.
        #[arg(long, default_value_t = 1001)]
        points: usize,
    },
    /// Power-law fit of the runtime over a sweep. Columns: N,k,g,runtime,fitted,lower,upper
    Fit {
        #[command(flatten)]
        common: Common,
    },
    /// Symbolic resource scaling as JSON, for g = N^kappa, k = N^lambda or g ~ R^sigma/log R.
    Scaling {
        #[arg(long, default_value = "cubic", value_parser = parse_kind)]
        kind: NonlinearityKind,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Regenerate figure 1, 2 or 3 (columns as simulate for 1 and 2, as fit for 3).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1001)]
        points: usize,
    },
    /// Re-run the configuration embedded in an output file.
    Replay {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

fn resolve_format(command: Command, format: Option<Format>, out: &Option<PathBuf>) -> Format {
    format
        .or_else(|| out.as_deref().and_then(Format::from_path))
        .unwrap_or(if command == Command::Scaling { Format::Json } else { Format::Csv })
}

fn apply(command: Command, c: &Common) -> RunConfig {
    let mut r = RunConfig::new(command);
    r.n = c.n;
    r.k = c.k;
    r.g = c.g;
    r.kind = c.kind;
    r.epsilon = c.eps;
    r.tol = c.tol;
    r.sweep = c.sweep;
    r.k_rule = c.k_rule;
    r.out = c.out.clone();
    r.format = resolve_format(command, c.format, &c.out);
    r
}

/// Turns parsed arguments into the configuration to run.
pub fn to_config(cmd: &Cmd) -> Result<RunConfig, CliError> {
    Ok(match cmd {
        Cmd::Simulate { common, t_end, points, figure } => {
            let mut r = apply(Command::Simulate, common);
            r.t_end = *t_end;
            r.points = *points;
            r.overlay = *figure;
            r
        }
        Cmd::Runtime { common } => apply(Command::Runtime, common),
        Cmd::Width { common } => apply(Command::Width, common),
        Cmd::Bounds { common, points } => {
            let mut r = apply(Command::Bounds, common);
            r.points = *points;
            r
        }
        Cmd::Fit { common } => apply(Command::Fit, common),
        Cmd::Scaling { kind, kappa, lambda, sigma, out, format } => {
            let mut r = RunConfig::new(Command::Scaling);
            r.kind = *kind;
            r.kappa = kappa.clone();
            r.lambda = lambda.clone();
            r.sigma = sigma.clone();
            r.out = out.clone();
            r.format = resolve_format(Command::Scaling, *format, out);
            r
        }
        Cmd::Figure { which, common, points } => {
            let mut r = apply(Command::Figure, common);
            r.figure = Some(*which);
            r.points = *points;
            r
        }
        Cmd::Replay { file, out, format } => {
            let mut r = crate::series::read_config(file)?;
            r.out = out.clone();
            r.format = match (format, out) {
                (None, None) => if r.command == Command::Scaling { Format::Json } else { Format::Csv },
                _ => resolve_format(r.command, *format, out),
            };
            r
        }
    })
}
