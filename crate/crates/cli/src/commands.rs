//! One function per subcommand, each turning a `RunConfig` into output.

use nlsearch_core::analytics::{
    bound_integrands, cq_runtime_closed, cubic_runtime, log_runtime_bounds, runtime_quadrature, width_report,
};
use nlsearch_core::dynamics::{integrate_reduced, measure_peak};
use nlsearch_core::scaling::{cq_scaling, cubic_scaling, fit_power_law, log_scaling, parse_exponent, ScalingQuery};
use nlsearch_core::{NonlinearityKind, SearchProblem};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, Format, GRule, KRule, RunConfig, Sweep};
use crate::error::CliError;
use crate::series::{Cell, PlotSpec, SeriesFile, VERSION};

pub enum Output {
    /// `failure` is set when a sweep stopped part way; `file` holds the rows that completed.
    Series { file: SeriesFile, failure: Option<CliError> },
    Json(Value),
}

impl Output {
    fn series(file: SeriesFile) -> Self {
        Output::Series { file, failure: None }
    }
}

pub fn execute(config: &RunConfig) -> Result<Output, CliError> {
    match config.command {
        Command::Simulate => simulate(config).map(Output::series),
        Command::Runtime => runtime(config).map(Output::series),
        Command::Width => width(config).map(Output::series),
        Command::Bounds => bounds(config).map(Output::series),
        Command::Fit => fit(config),
        Command::Scaling => scaling(config).map(Output::Json),
        Command::Figure => figure(config),
    }
}

fn problems(config: &RunConfig) -> Result<Vec<SearchProblem>, CliError> {
    config
        .instances()?
        .into_iter()
        .map(|(n, k, g)| SearchProblem::new(n, k, g, config.kind).map_err(CliError::from))
        .collect()
}

fn problem_cells(p: &SearchProblem) -> [Cell; 3] {
    [Cell::Int(p.n), Cell::Int(p.k), Cell::Real(p.g)]
}

/// Evaluates `f` on every problem in parallel. Results keep the input order.
fn par_rows<F>(problems: &[SearchProblem], f: F) -> Vec<Result<Vec<Vec<Cell>>, CliError>>
where
    F: Fn(&SearchProblem) -> Result<Vec<Vec<Cell>>, CliError> + Sync,
{
    problems.par_iter().map(|p| f(p)).collect()
}

fn all_rows(results: Vec<Result<Vec<Vec<Cell>>, CliError>>) -> Result<Vec<Vec<Cell>>, CliError> {
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Figure 2 layout: `N` in {100, 1000}, `k` in {1, 2}, `g` of order `N`, `N` and `sqrt(N)/log N`.
fn figure2_problems(kind: NonlinearityKind) -> Result<Vec<SearchProblem>, CliError> {
    let mut out = Vec::new();
    for n in [100u64, 1000] {
        for k in [1u64, 2] {
            let nf = n as f64;
            let g = match kind {
                NonlinearityKind::Loglinear => nf.sqrt() / nf.ln(),
                _ => nf,
            };
            out.push(SearchProblem::new(n, k, g, kind)?);
        }
    }
    Ok(out)
}

fn trajectory_file(config: &RunConfig, problems: &[SearchProblem], title: String) -> Result<SeriesFile, CliError> {
    let plot = PlotSpec { title, x: "t", ys: vec!["x"], group: vec!["N", "k", "g"] };
    let mut file = SeriesFile::new(config, vec!["N", "k", "g", "t", "x"], plot);
    let rows = par_rows(problems, |p| {
        let t_end = match config.t_end {
            Some(t) => t,
            None => 2.0 * runtime_quadrature(p)?,
        };
        let tr = integrate_reduced(p, t_end, config.tol)?;
        let [n, k, g] = problem_cells(p);
        Ok(tr.sample_uniform(config.points).into_iter().map(|(t, x)| vec![n, k, g, Cell::Real(t), Cell::Real(x)]).collect())
    });
    file.rows = all_rows(rows)?;
    if config.t_end.is_none() {
        file.notes.push("each run integrated to twice its quadrature runtime".into());
    }
    Ok(file)
}

pub fn simulate(config: &RunConfig) -> Result<SeriesFile, CliError> {
    if config.overlay {
        let mut file = trajectory_file(config, &figure2_problems(config.kind)?, format!("Success probability, {} nonlinearity", config.kind))?;
        file.notes.push("overlay: N in {100, 1000}, k in {1, 2}, g = N (cubic, cq) or sqrt(N)/ln N (log); --N, --k and --g ignored".into());
        return Ok(file);
    }
    trajectory_file(config, &problems(config)?, format!("Success probability, {} nonlinearity", config.kind))
}

pub fn runtime(config: &RunConfig) -> Result<SeriesFile, CliError> {
    let plot = PlotSpec { title: "Runtime".into(), x: "N", ys: vec!["runtime", "closed_form", "lower", "upper"], group: vec![] };
    let columns = vec!["N", "k", "g", "runtime", "closed_form", "lower", "upper"];
    let mut file = SeriesFile::new(config, columns, plot);
    let rows = par_rows(&problems(config)?, |p| {
        let t = runtime_quadrature(p)?;
        let closed = match p.kind {
            NonlinearityKind::Cubic => Some(cubic_runtime(p.n, p.k, p.g)),
            NonlinearityKind::CubicQuintic => cq_runtime_closed(p.n, p.k, p.g).ok(),
            NonlinearityKind::Loglinear => None,
        };
        let bounds = match p.kind {
            NonlinearityKind::Loglinear => log_runtime_bounds(p.n, p.k, p.g).ok(),
            _ => None,
        };
        let [n, k, g] = problem_cells(p);
        Ok(vec![vec![
            n,
            k,
            g,
            Cell::Real(t),
            closed.into(),
            bounds.map(|b| b.lower).into(),
            bounds.map(|b| b.upper).into(),
        ]])
    });
    file.rows = all_rows(rows)?;
    file.notes.push("runtime is the quadrature value; closed_form needs N > 2k and g > 0 for cq; lower and upper are loglinear bounds".into());
    Ok(file)
}

pub fn width(config: &RunConfig) -> Result<SeriesFile, CliError> {
    let plot = PlotSpec {
        title: format!("Peak width above 1 - {}", config.epsilon),
        x: "N",
        ys: vec!["quadrature", "exact", "leading_order", "bound", "measured"],
        group: vec![],
    };
    let columns = vec!["N", "k", "g", "quadrature", "exact", "leading_order", "bound", "measured"];
    let mut file = SeriesFile::new(config, columns, plot);
    let rows = par_rows(&problems(config)?, |p| {
        let r = width_report(p, config.epsilon)?;
        let t_end = 1.6 * runtime_quadrature(p)?;
        let measured = measure_peak(&integrate_reduced(p, t_end, config.tol)?, config.epsilon)?.width;
        let [n, k, g] = problem_cells(p);
        Ok(vec![vec![
            n,
            k,
            g,
            Cell::Real(r.quadrature),
            r.exact.into(),
            r.leading_order.into(),
            r.bound.into(),
            Cell::Real(measured),
        ]])
    });
    file.rows = all_rows(rows)?;
    file.notes.push("measured is the time above 1 - epsilon on the integrated trajectory".into());
    Ok(file)
}

pub fn bounds(config: &RunConfig) -> Result<SeriesFile, CliError> {
    if config.kind != NonlinearityKind::Loglinear {
        return Err(CliError::Domain("bounds needs --kind log".into()));
    }
    if config.sweep.is_some() {
        return Err(CliError::Domain("bounds takes a single instance, not a sweep".into()));
    }
    let [p] = problems(config)?[..] else { unreachable!() };
    let b = log_runtime_bounds(p.n, p.k, p.g)?;
    let t = runtime_quadrature(&p)?;
    let ys = vec!["original", "lower", "upper_loose", "upper", "log_exact", "log_linear"];
    let plot = PlotSpec { title: format!("Bound integrands, N={} k={} g={}", p.n, p.k, p.g), x: "x", ys: ys.clone(), group: vec![] };
    let mut columns = vec!["x"];
    columns.extend(ys);
    let mut file = SeriesFile::new(config, columns, plot);
    let x0 = p.x0();
    let m = config.points.max(1);
    for i in 1..=m {
        let x = x0 + (1.0 - x0) * i as f64 / (m + 1) as f64;
        let v = bound_integrands(p.n, p.k, p.g, x)?;
        let row: Vec<f64> = vec![v.x, v.original, v.lower, v.upper_loose, v.upper, v.log_exact, v.log_linear];
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Domain(format!("non-finite integrand {bad} at x = {x}")));
        }
        file.rows.push(row.into_iter().map(Cell::Real).collect());
    }
    file.notes.push("integrands omit the common factor N/(2 sqrt(k)); grid excludes the endpoints k/N and 1".into());
    file.scalars = vec![
        ("lower".into(), b.lower),
        ("lower_split".into(), b.lower_split),
        ("quadrature".into(), t),
        ("upper".into(), b.upper),
        ("upper_loose".into(), b.upper_loose),
    ];
    Ok(file)
}

pub fn fit(config: &RunConfig) -> Result<Output, CliError> {
    if config.sweep.is_none() {
        return Err(CliError::Domain("fit needs --sweep".into()));
    }
    let is_log = config.kind == NonlinearityKind::Loglinear;
    let plot = PlotSpec { title: "Runtime power-law fit".into(), x: "N", ys: vec!["runtime", "fitted"], group: vec![] };
    let columns = vec!["N", "k", "g", "runtime", "fitted", "lower", "upper"];
    let mut file = SeriesFile::new(config, columns, plot);
    let results = par_rows(&problems(config)?, |p| {
        let t = runtime_quadrature(p)?;
        let b = if is_log { log_runtime_bounds(p.n, p.k, p.g).ok() } else { None };
        let [n, k, g] = problem_cells(p);
        Ok(vec![vec![n, k, g, Cell::Real(t), Cell::Missing, b.map(|b| b.lower).into(), b.map(|b| b.upper).into()]])
    });
    let mut failure = None;
    for r in results {
        match r {
            Ok(rows) => file.rows.extend(rows),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    let column = |file: &SeriesFile, i: usize| -> Vec<(f64, f64)> {
        file.rows.iter().filter_map(|r| Some((r[0].value()?, r[i].value()?))).collect()
    };
    let f = match fit_power_law(&column(&file, 3)) {
        Ok(f) => f,
        Err(e) if failure.is_none() => return Err(e.into()),
        Err(_) => {
            let written = file.rows.len();
            return Ok(Output::Series { file, failure: Some(CliError::Partial { written, source: Box::new(failure.unwrap()) }) });
        }
    };
    for row in &mut file.rows {
        row[4] = Cell::Real(f.predict(row[0].value().unwrap()));
    }
    file.scalars = vec![("coefficient".into(), f.coefficient), ("exponent".into(), f.exponent), ("r_squared".into(), f.r_squared)];
    if is_log {
        for (name, i) in [("lower_exponent", 5), ("upper_exponent", 6)] {
            match fit_power_law(&column(&file, i)) {
                Ok(b) => file.scalars.push((name.into(), b.exponent)),
                Err(_) => file.notes.push(format!("{name} omitted: bound not positive over the whole sweep")),
            }
        }
    }
    file.notes.push("fitted = coefficient * N^exponent, least squares on log t against log N".into());
    let failure = failure.map(|e| CliError::Partial { written: file.rows.len(), source: Box::new(e) });
    Ok(Output::Series { file, failure })
}

pub fn scaling(config: &RunConfig) -> Result<Value, CliError> {
    let exponent = |v: &Option<String>, name: &str| -> Result<_, CliError> {
        let s = v.as_deref().ok_or_else(|| CliError::Domain(format!("scaling for {} needs --{name}", config.kind)))?;
        Ok(parse_exponent(s)?)
    };
    let report = match config.kind {
        NonlinearityKind::Cubic => cubic_scaling(ScalingQuery::new(exponent(&config.kappa, "kappa")?, exponent(&config.lambda, "lambda")?))?,
        NonlinearityKind::CubicQuintic => cq_scaling(ScalingQuery::new(exponent(&config.kappa, "kappa")?, exponent(&config.lambda, "lambda")?))?,
        NonlinearityKind::Loglinear => log_scaling(exponent(&config.sigma, "sigma")?)?,
    };
    Ok(json!({ "meta": { "version": VERSION, "config": config }, "report": report }))
}

/// Pins the parameters of the requested figure so the header records what ran.
pub fn resolve_figure(config: &RunConfig) -> Result<RunConfig, CliError> {
    let mut c = config.clone();
    match config.figure {
        Some(1) => {
            c.kind = NonlinearityKind::Cubic;
            c.overlay = false;
        }
        Some(2) => c.overlay = true,
        Some(3) => {
            c.kind = NonlinearityKind::Loglinear;
            c.sweep = Some(Sweep { start: 500_000, end: 1_000_000, step: 10_000 });
            c.k_rule = Some(KRule::CeilPow(0.25));
            c.g = GRule::PowOverLogNk(0.125);
        }
        other => return Err(CliError::Domain(format!("figure must be 1, 2 or 3, got {other:?}"))),
    }
    Ok(c)
}

pub fn figure(config: &RunConfig) -> Result<Output, CliError> {
    let c = resolve_figure(config)?;
    match c.figure {
        Some(1) => {
            let mut ps = Vec::new();
            for n in [100u64, 1000] {
                for k in [1u64, 2] {
                    ps.push(SearchProblem::new(n, k, (n - k) as f64, NonlinearityKind::Cubic)?);
                }
            }
            let mut file = trajectory_file(&c, &ps, "Cubic nonlinearity, constant-time coupling".into())?;
            file.notes.push("g = N - k, the coupling for which the cubic runtime is pi/2 independent of N".into());
            Ok(Output::series(file))
        }
        Some(2) => {
            let mut file = simulate(&c)?;
            file.plot.title = format!("Success probability, {} nonlinearity", c.kind);
            Ok(Output::series(file))
        }
        _ => {
            let out = fit(&c)?;
            if let Output::Series { mut file, failure } = out {
                file.plot.title = "Loglinear runtime, k = ceil(N^(1/4)), g = N^(1/8)/ln(N/k)".into();
                return Ok(Output::Series { file, failure });
            }
            Ok(out)
        }
    }
}

/// Runs the configuration and writes its output where the configuration says.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match execute(config)? {
        Output::Json(v) => {
            if config.format != Format::Json {
                return Err(CliError::Domain("scaling output is JSON only; use --format json".into()));
            }
            crate::series::emit(config.out.as_deref(), &(serde_json::to_string_pretty(&v).unwrap() + "\n"))?;
            Ok(())
        }
        Output::Series { file, failure } => {
            file.write()?;
            match failure {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
    }
}
