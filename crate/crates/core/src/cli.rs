//! Command line front end.
//!
//! Every subcommand produces an [`Artifact`] (a table or a JSON record),
//! which is rendered as CSV or JSON and written atomically. Errors are
//! reported on standard error as one JSON object
//! `{"error": {"module", "operation", "case", "message"}}` with exit code 2
//! for invalid input and 3 for numerical failures; `verify` exits with 1
//! when a criterion fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fibre::{corridor_partition, fibre_pressure};
use crate::model_file::{resolve_model, Model};
use crate::pressure::{bowen_delta, classical_pressure, gibbs_measure, GibbsMeasure, SubAlphabet, ENUMERATION_CAP};
use crate::sim::{sample_orbits, summarize, SampleMode};
use crate::solve::Tolerance;
use crate::spectrum::{default_grid, drift_and_gap, spectrum_sweep, SpectrumCurve, NEWTON_RESIDUAL};
use crate::symbolic::{BranchModel, CylinderPotential};
use crate::verify::{self, Depth};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "PRESSURELAB_THREADS";

/// Column order of spectrum tables.
pub const SPECTRUM_COLUMNS: [&str; 7] = [
    "alpha",
    "delta_root",
    "delta_newton",
    "delta_legendre",
    "q_alpha",
    "slope",
    "discrepancy",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pressurelab", version, about = "Pressure, spectra and dimension gaps of skew-periodic Z-extensions")]
pub struct Cli {
    /// Built-in model (rw_C1_C2, asym_C_M1_M2, multi_C_G1_G2) or a model file.
    #[arg(long, global = true, default_value = "rw_0.5_0.5")]
    pub model: String,

    /// Output file; written to a temporary file and renamed on success.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Include the numerical tolerances in the output.
    #[arg(long, global = true)]
    pub echo_precision: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical pressure of sφ + qψ + a.
    Pressure {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
    },
    /// Fibre-induced pressure of tφ with respect to ψ.
    Fibre {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// δ_α by three methods on a grid of α.
    Spectrum {
        /// Number of evenly spaced interior points (endpoints are appended).
        #[arg(long, conflicts_with = "alphas")]
        grid: Option<usize>,
        /// Explicit comma separated α values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Option<Vec<f64>>,
        /// Also draw the curve as an SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Drift, δ, δ₀ and the dimension gap.
    Gap,
    /// δ₀ and δ of the random walk models (c, 1 - c).
    GapSweep {
        #[arg(long, default_value_t = 0.05)]
        cmin: f64,
        #[arg(long, default_value_t = 0.95)]
        cmax: f64,
        #[arg(long, default_value_t = 91)]
        steps: usize,
    },
    /// The corridor series term ζ_n(sφ, ψ - α, K).
    Zeta {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long = "K")]
        k: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: f64,
    },
    /// Sample orbits and report drift and recurrence proxies.
    Simulate {
        /// gibbs, gibbs(S), bernoulli(P1,P2,...) or dirac(I) with 1-based I.
        #[arg(long, default_value = "gibbs")]
        measure: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long = "K", default_value_t = 1.0)]
        k: f64,
    },
    /// Run the cross-method invariant suite.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pressure { .. } => "pressure",
            Command::Fibre { .. } => "fibre",
            Command::Spectrum { .. } => "spectrum",
            Command::Gap => "gap",
            Command::GapSweep { .. } => "gap-sweep",
            Command::Zeta { .. } => "zeta",
            Command::Simulate { .. } => "simulate",
            Command::Verify { .. } => "verify",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Spectrum { .. } | Command::GapSweep { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

/// The result of a subcommand before rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Table { columns: Vec<String>, rows: Vec<Vec<Cell>> },
    Record(Value),
    Lines(Vec<String>),
}

/// Decimal rendering with 15 significant digits.
pub fn format_significant(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (14 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    // tidy trailing zeros of the fractional part
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) => json!(x),
        Cell::Text(s) => json!(s),
        Cell::Missing => Value::Null,
    }
}

fn scalar_csv(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n.as_f64().map(format_significant).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(text: String) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

impl Artifact {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Artifact::Table { columns, rows }, Format::Csv) => {
                let mut out = columns.join(",") + "\n";
                for row in rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(x) => format_significant(*x),
                            Cell::Text(s) => csv_field(s.clone()),
                            Cell::Missing => String::new(),
                        })
                        .collect();
                    out += &cells.join(",");
                    out.push('\n');
                }
                out
            }
            (Artifact::Table { columns, rows }, Format::Json) => {
                let records: Vec<Value> = rows
                    .iter()
                    .map(|row| {
                        Value::Object(columns.iter().cloned().zip(row.iter().map(cell_json)).collect())
                    })
                    .collect();
                serde_json::to_string_pretty(&records).expect("json values serialise") + "\n"
            }
            (Artifact::Record(v), Format::Json) => serde_json::to_string_pretty(v).expect("json values serialise") + "\n",
            (Artifact::Record(v), Format::Csv) => match v {
                Value::Object(map) => {
                    let keys: Vec<String> = map.keys().cloned().collect();
                    let values: Vec<String> = map.values().map(|v| csv_field(scalar_csv(v))).collect();
                    format!("{}\n{}\n", keys.join(","), values.join(","))
                }
                other => scalar_csv(other) + "\n",
            },
            (Artifact::Lines(lines), _) => lines.join("\n") + "\n",
        }
    }
}

fn precision_record() -> Value {
    let tol = Tolerance::default();
    json!({
        "root_x_tolerance": tol.x,
        "root_max_iterations": tol.max_iter,
        "newton_residual": NEWTON_RESIDUAL,
        "power_iteration_residual": crate::pressure::PowerIteration::default().tol,
        "enumeration_cap": ENUMERATION_CAP as f64,
    })
}

/// Parses the `--measure` grammar against a model.
pub fn parse_measure(text: &str, model: &BranchModel) -> Result<GibbsMeasure> {
    let r = model.alphabet_size();
    let bad = || Error::Validation(format!("cannot parse measure '{text}'"));
    let (head, args) = match text.split_once('(') {
        Some((h, rest)) => (h.trim(), Some(rest.strip_suffix(')').ok_or_else(bad)?)),
        None => (text.trim(), None),
    };
    let numbers = |s: &str| -> Result<Vec<f64>> {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect()
    };
    let gibbs = |s: f64| gibbs_measure(&model.geometric_potential().scaled(s), &SubAlphabet::full(r));
    match (head, args) {
        ("gibbs", None) => gibbs(bowen_delta(model)?),
        ("gibbs", Some(a)) => match numbers(a)?.as_slice() {
            [s] => gibbs(*s),
            _ => Err(bad()),
        },
        ("bernoulli", Some(a)) => {
            let p = numbers(a)?;
            if p.len() != r {
                return Err(Error::Validation(format!("bernoulli needs {r} probabilities, got {}", p.len())));
            }
            GibbsMeasure::bernoulli(&p)
        }
        ("dirac", Some(a)) => {
            let i: usize = a.trim().parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(Error::Validation("dirac symbols are numbered from 1".into()));
            }
            GibbsMeasure::dirac(r, i - 1)
        }
        _ => Err(bad()),
    }
}

fn spectrum_table(curve: &SpectrumCurve) -> Artifact {
    let rows = curve
        .points
        .iter()
        .map(|p| {
            vec![
                Cell::Num(p.alpha),
                p.delta_root.into(),
                p.delta_newton.into(),
                p.delta_legendre.into(),
                p.q_alpha.into(),
                p.slope.into(),
                p.discrepancy.into(),
            ]
        })
        .collect();
    Artifact::Table {
        columns: SPECTRUM_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

/// A static SVG drawing of `α ↦ δ_α`.
pub fn spectrum_svg(curve: &SpectrumCurve) -> String {
    let (w, h, pad) = (640.0, 400.0, 48.0);
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.delta.is_finite())
        .map(|p| (p.alpha, p.delta))
        .collect();
    let (amin, amax) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, _)| (lo.min(*a), hi.max(*a)));
    let dmax = pts.iter().map(|p| p.1).fold(0.0, f64::max).max(1e-12);
    let span = (amax - amin).max(1e-12);
    let x = |a: f64| pad + (a - amin) / span * (w - 2.0 * pad);
    let y = |d: f64| h - pad - d / dmax * (h - 2.0 * pad);
    let path: Vec<String> = pts.iter().map(|&(a, d)| format!("{:.2},{:.2}", x(a), y(d))).collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            "<line x1=\"{pad}\" y1=\"{base}\" x2=\"{right}\" y2=\"{base}\" stroke=\"black\"/>\n",
            "<line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{base}\" stroke=\"black\"/>\n",
            "<text x=\"{pad}\" y=\"{label}\" font-size=\"12\">{amin:.3}</text>\n",
            "<text x=\"{right}\" y=\"{label}\" font-size=\"12\" text-anchor=\"end\">{amax:.3}</text>\n",
            "<text x=\"4\" y=\"{top}\" font-size=\"12\">{dmax:.3}</text>\n",
            "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{points}\"/>\n",
            "</svg>\n"
        ),
        w = w,
        h = h,
        pad = pad,
        base = h - pad,
        right = w - pad,
        label = h - pad + 16.0,
        top = pad + 4.0,
        amin = amin,
        amax = amax,
        dmax = dmax,
        points = path.join(" "),
    )
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so that readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("--{name} must be positive, got {x}")))
    }
}

fn model(cli: &Cli) -> Result<Model> {
    resolve_model(&cli.model)
}

/// Runs a parsed command and returns its artifact together with whether
/// it represents a failure (only `verify` can fail this way).
pub fn execute(cli: &Cli) -> Result<(Artifact, bool)> {
    let mut failed = false;
    let artifact = match &cli.command {
        Command::Pressure { s, q, a } => {
            let m = model(cli)?;
            let f = CylinderPotential::linear_combination(&[(*s, &m.phi()), (*q, &m.psi())], *a)?;
            let p = classical_pressure(&f, &SubAlphabet::full(m.branches().alphabet_size()))?;
            Artifact::Record(json!({
                "s": s, "q": q, "a": a,
                "pressure": p.value,
                "method": format!("{:?}", p.method),
                "residual": p.residual,
            }))
        }
        Command::Fibre { t } => {
            let m = model(cli)?;
            let r = fibre_pressure(&m.phi().scaled(*t), &m.psi())?;
            Artifact::Record(json!({
                "t": t,
                "value": finite_or_null(r.value),
                "minimizer": r.minimizer,
                "regime": format!("{:?}", r.regime),
                "i0": r.i0.map(|j| j.symbols().iter().map(|s| s + 1).collect::<Vec<_>>()),
            }))
        }
        Command::Spectrum { grid, alphas, svg } => {
            let m = model(cli)?;
            let points = match (grid, alphas) {
                (_, Some(a)) if a.is_empty() => return Err(Error::Validation("--alphas is empty".into())),
                (_, Some(a)) => a.clone(),
                (Some(0), None) => return Err(Error::Validation("--grid must be at least 1".into())),
                (Some(n), None) => default_grid(m.branches(), *n),
                (None, None) => default_grid(m.branches(), 201),
            };
            let curve = spectrum_sweep(m.branches(), &points)?;
            if let Some(path) = svg {
                write_atomic(path, spectrum_svg(&curve).as_bytes())?;
            }
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => spectrum_table(&curve),
                Format::Json => Artifact::Record(serde_json::to_value(&curve).expect("curves serialise")),
            }
        }
        Command::Gap => {
            let m = model(cli)?;
            Artifact::Record(serde_json::to_value(drift_and_gap(m.branches())?).expect("reports serialise"))
        }
        Command::GapSweep { cmin, cmax, steps } => {
            if !(0.0 < *cmin && cmin <= cmax && *cmax < 1.0) || *steps == 0 {
                return Err(Error::Validation(format!(
                    "need 0 < cmin <= cmax < 1 and steps >= 1, got {cmin}, {cmax}, {steps}"
                )));
            }
            let grid: Vec<f64> = match steps {
                1 => vec![*cmin],
                n => (0..*n).map(|i| cmin + (cmax - cmin) * i as f64 / (n - 1) as f64).collect(),
            };
            let rows = grid
                .par_iter()
                .map(|&c| match BranchModel::random_walk(c, 1.0 - c).and_then(|m| drift_and_gap(&m)) {
                    Ok(r) => vec![c.into(), r.delta0.into(), r.delta.into(), r.gap.into(), Cell::Missing],
                    Err(e) => vec![c.into(), Cell::Missing, Cell::Missing, Cell::Missing, Cell::Text(e.case().into())],
                })
                .collect();
            Artifact::Table {
                columns: ["c", "delta0", "delta", "gap", "error"].map(String::from).to_vec(),
                rows,
            }
        }
        Command::Zeta { alpha, k, n, s } => {
            check_positive("K", *k)?;
            if *n == 0 {
                return Err(Error::Validation("--n must be at least 1".into()));
            }
            if !(*s >= 0.0) {
                return Err(Error::Validation(format!("--s must be non-negative, got {s}")));
            }
            let m = model(cli)?;
            let table = corridor_partition(&m.phi().scaled(*s), &m.psi(), *alpha, *k, *n)?;
            Artifact::Record(json!({
                "alpha": alpha, "K": k, "n": n, "s": s,
                "zeta": table.zeta_n(),
                "log_zeta": finite_or_null(table.log_zeta_n()),
            }))
        }
        Command::Simulate { measure, n, count, seed, alpha, k } => {
            check_positive("K", *k)?;
            let m = model(cli)?;
            let mu = parse_measure(measure, m.branches())?;
            let batch = sample_orbits(&mu, &m.branches().step_potential(), *n, *count, *seed, SampleMode::Summary)?;
            let mut record = serde_json::to_value(summarize(&batch, *alpha, *k)).expect("summaries serialise");
            record["proxy"] = json!("recur_frac: |S_j - j alpha| <= K for some j >= n/2; unif_frac: for all j <= n");
            Artifact::Record(record)
        }
        Command::Verify { quick } => {
            let depth = if *quick { Depth::Quick } else { Depth::Full };
            let results = verify::run(depth);
            failed = verify::summarize(&results).is_err();
            match cli.format {
                Some(Format::Json) => Artifact::Record(serde_json::to_value(&results).expect("results serialise")),
                _ => Artifact::Lines(results.iter().map(|c| c.to_string()).collect()),
            }
        }
    };
    let artifact = match (cli.echo_precision, artifact) {
        (true, Artifact::Record(Value::Object(mut map))) => {
            map.insert("precision".into(), precision_record());
            Artifact::Record(Value::Object(map))
        }
        (true, other) => {
            eprintln!("{}", json!({ "precision": precision_record() }));
            other
        }
        (false, other) => other,
    };
    Ok((artifact, failed))
}

/// The JSON error record printed on standard error.
pub fn error_record(operation: &str, e: &Error) -> Value {
    let mut inner = Map::new();
    inner.insert("module".into(), json!(e.module()));
    inner.insert("operation".into(), json!(operation));
    inner.insert("case".into(), json!(e.case()));
    inner.insert("message".into(), json!(e.to_string()));
    json!({ "error": inner })
}

fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Validation(format!("{THREADS_ENV} must be a positive integer, got '{text}'")))?;
    // a pool that already exists (repeated calls in one process) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code != 0 {
                let record = error_record("parse", &Error::Validation(e.kind().to_string()));
                eprintln!("{record}");
            }
            return code;
        }
    };
    let operation = cli.command.name();
    let outcome = configure_threads().and_then(|()| {
        let (artifact, failed) = execute(&cli)?;
        let text = artifact.render(cli.format.unwrap_or(cli.command.default_format()));
        match &cli.out {
            Some(path) => write_atomic(path, text.as_bytes())?,
            None => print!("{text}"),
        }
        Ok(failed)
    });
    match outcome {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(e) => {
            eprintln!("{}", error_record(operation, &e));
            if e.is_validation() {
                2
            } else {
                3
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("pressurelab").chain(args.iter().copied())).unwrap()
    }

    fn record(args: &[&str]) -> Value {
        match execute(&parse(args)).unwrap().0 {
            Artifact::Record(v) => v,
            other => panic!("expected a record, got {other:?}"),
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(1.0), "1");
        assert_eq!(format_significant(0.5), "0.5");
        assert_eq!(format_significant(1.0 / 3.0), "0.333333333333333");
        assert_eq!(format_significant(-123.456789012345678), "-123.456789012346");
        assert_eq!(format_significant(2.5e-12), "0.0000000000025");
        assert_eq!(format_significant(0.0), "0");
    }

    #[test]
    fn zeta_of_four_words() {
        let v = record(&["zeta", "--model", "rw_0.5_0.5", "--alpha", "0", "--K", "0.5", "--n", "2", "--s", "1"]);
        assert!((v["zeta"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gap_of_skewed_walk() {
        let v = record(&["gap", "--model", "rw_0.3_0.7"]);
        assert!((v["delta"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        let delta0 = 4f64.ln() / ((1.0 / 0.3f64).ln() + (1.0 / 0.7f64).ln());
        assert!((v["delta0"].as_f64().unwrap() - delta0).abs() < 1e-9);
        assert!((v["gap"].as_f64().unwrap() - (1.0 - delta0)).abs() < 1e-9);
        assert!((v["drift"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn spectrum_csv_has_the_schema() {
        let cli = parse(&["spectrum", "--model", "rw_0.5_0.5", "--alphas", "-0.5,0,0.5"]);
        let (artifact, _) = execute(&cli).unwrap();
        let text = artifact.render(Format::Csv);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), SPECTRUM_COLUMNS.join(","));
        let zero: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
        assert_eq!(zero[0], "0");
        assert!((zero[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pressure_and_fibre_records() {
        let v = record(&["pressure", "--model", "rw_0.4_0.6", "--s", "1", "--q", "0.3"]);
        let want = (0.4 * (-0.3f64).exp() + 0.6 * 0.3f64.exp()).ln();
        assert!((v["pressure"].as_f64().unwrap() - want).abs() < 1e-14);
        let v = record(&["fibre", "--model", "asym_0.5_1_2", "--t", "1"]);
        assert_eq!(v["regime"], "Empty");
        assert!(v["value"].is_null());
        let v = record(&["fibre", "--model", "asym_0.5_0_1", "--t", "1", "--echo-precision"]);
        assert_eq!(v["regime"], "BoundaryLower");
        assert_eq!(v["i0"], json!([1]));
        assert!(v["precision"]["newton_residual"].is_number());
    }

    #[test]
    fn measures() {
        let m = BranchModel::random_walk(0.4, 0.6).unwrap();
        assert!(parse_measure("gibbs", &m).is_ok());
        assert!(parse_measure("gibbs(0.5)", &m).is_ok());
        assert_eq!(parse_measure("dirac(2)", &m).unwrap().symbols(), &[1]);
        assert!(parse_measure("bernoulli(0.3,0.7)", &m).is_ok());
        assert!(parse_measure("bernoulli(0.3)", &m).is_err());
        assert!(parse_measure("dirac(0)", &m).is_err());
        assert!(parse_measure("poisson", &m).is_err());
    }

    #[test]
    fn gap_sweep_rows() {
        let cli = parse(&["gap-sweep", "--cmin", "0.25", "--cmax", "0.75", "--steps", "3"]);
        let (Artifact::Table { rows, .. }, _) = execute(&cli).unwrap() else {
            panic!("expected a table");
        };
        let gap = |row: &Vec<Cell>| match row[3] {
            Cell::Num(g) => g,
            _ => f64::NAN,
        };
        assert!(gap(&rows[0]) > 0.1);
        assert!(gap(&rows[1]).abs() < 1e-10);
        assert!((gap(&rows[0]) - gap(&rows[2])).abs() < 1e-12);
    }

    #[test]
    fn errors_map_to_records_and_codes() {
        let v = error_record("zeta", &Error::Width { width: 10, cap: 5 });
        assert_eq!(v["error"]["module"], "fibre");
        assert_eq!(v["error"]["case"], "WidthError");
        assert_eq!(run(["pressurelab", "zeta", "--alpha", "0", "--K", "-1", "--n", "3", "--s", "1"]), 2);
        assert_eq!(run(["pressurelab", "gap", "--model", "rw_0.8_0.8"]), 2);
        assert_eq!(run(["pressurelab", "frobnicate"]), 2);
    }

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
