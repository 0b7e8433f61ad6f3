//! The `kernelcurve` command line.
//!
//! Every subcommand reads one model document and writes JSON to standard
//! output, or CSV where `--csv` applies. Failures go to standard error as
//! `{"error_kind": ..., "message": ...}` with exit code 2 for usage errors,
//! 3 for model errors and 4 for numerical failures.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::classify::{branch_points, genus_report};
use crate::error::{Error, ErrorClass};
use crate::involutions::{points_csv, sigma_order, KernelCurve};
use crate::kernel::{discriminant, Axis, CurvePoint, ProjPoint};
use crate::model::{format_rational, parse_model, parse_rational, StepSet, WalkModel};
use crate::series::{verify_functional_equation, walk_series};
use crate::{uniform_g0, uniform_g1};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MODEL: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "kernelcurve",
    version,
    about = "Kernel curves of weighted small-step quadrant walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degeneracy, genus, singular point and branch points.
    Classify(Common),
    /// Parameters of the uniformization (q in genus 0, periods in genus 1).
    Uniformize(Common),
    /// An orbit of σ and the order of σ.
    Orbit(Common),
    /// Checks the kernel functional equation on the exact series.
    Verify(Common),
    /// Exact walk counts q(i,j,k).
    Enumerate(Common),
    /// Samples the uniformization on a grid, as CSV.
    Sample(Common),
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Model document.
    model: PathBuf,
    /// JSON output (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV output where the command supports it.
    #[arg(long)]
    csv: bool,
    /// Truncation order for `verify` and `enumerate`, search bound for `orbit`.
    #[arg(long)]
    order: Option<usize>,
    /// Number of orbit points.
    #[arg(long)]
    steps: Option<usize>,
    /// Starting point "x_re,x_im,y_re,y_im" in the affine chart.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Sampling grid "NxM".
    #[arg(long)]
    grid: Option<String>,
    /// Return tolerance of the order search.
    #[arg(long)]
    tol: Option<f64>,
    /// "all-subsets" or "t=a:b:n".
    #[arg(long)]
    sweep: Option<String>,
    /// Single coefficient "i,j,k" for `enumerate`.
    #[arg(long)]
    coeff: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_MODEL,
            Failure::Lib(e) => match e.class() {
                ErrorClass::Model => EXIT_MODEL,
                ErrorClass::Numeric => EXIT_NUMERIC,
            },
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Usage(m) => json!({"error_kind": "Usage", "message": m}),
            Failure::Io(m) => json!({"error_kind": "ModelFileUnreadable", "message": m}),
            Failure::Lib(e) => json!({"error_kind": e.kind(), "message": e.to_string()}),
        }
    }
}

fn error_json(e: &Error) -> Value {
    json!({"error_kind": e.kind(), "message": e.to_string()})
}

/// What a subcommand produced.
enum Output {
    Json(Value),
    Text(String),
}

/// Runs the command line with `args` (program name first) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let f = Failure::Usage(e.to_string());
            let _ = writeln!(stderr, "{}", f.to_json());
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command) {
        Ok(Output::Json(v)) => {
            let text = serde_json::to_string_pretty(&v).expect("serializable output");
            let _ = writeln!(stdout, "{text}");
            EXIT_OK
        }
        Ok(Output::Text(s)) => {
            let _ = write!(stdout, "{s}");
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.to_json());
            f.exit_code()
        }
    }
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    let (common, op): (&Common, Op) = match cmd {
        Command::Classify(c) => (c, Op::Classify),
        Command::Uniformize(c) => (c, Op::Uniformize),
        Command::Orbit(c) => (c, Op::Orbit),
        Command::Verify(c) => (c, Op::Verify),
        Command::Enumerate(c) => (c, Op::Enumerate),
        Command::Sample(c) => (c, Op::Sample),
    };
    let text = std::fs::read_to_string(&common.model)
        .map_err(|e| Failure::Io(format!("{}: {e}", common.model.display())))?;
    let model = parse_model(&text)?;
    let opts = Options::from_common(common, op)?;

    match &common.sweep {
        None => Ok(op.run(&model, &opts)?),
        Some(spec) => {
            if opts.csv {
                return Err(Failure::Usage("--csv cannot be combined with --sweep".into()));
            }
            let models = sweep_models(&model, spec)?;
            let rows: Vec<Value> = models
                .into_iter()
                .map(|(label, m)| {
                    let result = match m.and_then(|m| op.run(&m, &opts)) {
                        Ok(Output::Json(v)) => json!({"ok": v}),
                        Ok(Output::Text(s)) => json!({"ok": s}),
                        Err(e) => json!({"error": error_json(&e)}),
                    };
                    let mut row = label;
                    row.as_object_mut()
                        .expect("label is an object")
                        .extend(result.as_object().expect("result is an object").clone());
                    row
                })
                .collect();
            Ok(Output::Json(Value::Array(rows)))
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Classify,
    Uniformize,
    Orbit,
    Verify,
    Enumerate,
    Sample,
}

struct Options {
    csv: bool,
    order: Option<usize>,
    steps: usize,
    start: Option<(Complex64, Complex64)>,
    grid: (usize, usize),
    tol: f64,
    coeff: Option<(usize, usize, usize)>,
}

fn parse_list<T: std::str::FromStr>(s: &str, sep: char, n: usize, what: &str) -> Result<Vec<T>, Failure> {
    let parts: Vec<&str> = s.split(sep).map(str::trim).collect();
    let values: Option<Vec<T>> = parts.iter().map(|p| p.parse().ok()).collect();
    match values {
        Some(v) if v.len() == n => Ok(v),
        _ => Err(Failure::Usage(format!("cannot parse {what} {s:?}"))),
    }
}

impl Options {
    fn from_common(c: &Common, op: Op) -> Result<Self, Failure> {
        let csv_ok = matches!(op, Op::Orbit | Op::Enumerate | Op::Sample);
        if c.csv && !csv_ok {
            return Err(Failure::Usage(format!("--csv is not available for {op:?}")));
        }
        if c.json && matches!(op, Op::Sample) {
            return Err(Failure::Usage("sample writes CSV only".into()));
        }
        let start = match &c.start {
            None => None,
            Some(s) => {
                let v: Vec<f64> = parse_list(s, ',', 4, "--start")?;
                Some((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
            }
        };
        let grid = match &c.grid {
            None => (20, 20),
            Some(g) => {
                let v: Vec<usize> = parse_list(&g.to_ascii_lowercase(), 'x', 2, "--grid")?;
                if v[0] == 0 || v[1] == 0 {
                    return Err(Failure::Usage("--grid dimensions must be positive".into()));
                }
                (v[0], v[1])
            }
        };
        let coeff = match &c.coeff {
            None => None,
            Some(s) => {
                let v: Vec<usize> = parse_list(s, ',', 3, "--coeff")?;
                Some((v[0], v[1], v[2]))
            }
        };
        let tol = c.tol.unwrap_or(1e-8);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Usage("--tol must be a positive number".into()));
        }
        Ok(Options {
            csv: c.csv,
            order: c.order,
            steps: c.steps.unwrap_or(10),
            start,
            grid,
            tol,
            coeff,
        })
    }
}

/// Models of a sweep, each with a JSON label.
fn sweep_models(
    base: &WalkModel,
    spec: &str,
) -> Result<Vec<(Value, Result<WalkModel, Error>)>, Failure> {
    let t = base
        .exact_weights()
        .map(|e| e.t().clone())
        .ok_or_else(|| Failure::Usage("sweeps need an exact model".into()))?;
    if spec == "all-subsets" {
        return Ok((1..=255u8)
            .map(|mask| {
                let steps = StepSet::from_mask(mask);
                let list: Vec<(i8, i8)> = steps.iter().collect();
                let label = json!({"mask": mask, "steps": steps.to_string()});
                (label, WalkModel::equal_weights(&list, t.clone()))
            })
            .collect());
    }
    let range = spec
        .strip_prefix("t=")
        .ok_or_else(|| Failure::Usage(format!("unknown sweep {spec:?}")))?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!("sweep must be t=a:b:n, found {spec:?}")));
    }
    let bad = |_| Failure::Usage(format!("cannot parse sweep {spec:?}"));
    let a = parse_rational(parts[0]).map_err(bad)?;
    let b = parse_rational(parts[1]).map_err(bad)?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("cannot parse sweep count in {spec:?}")))?;
    if n == 0 {
        return Err(Failure::Usage("sweep count must be positive".into()));
    }
    Ok((0..n)
        .map(|k| {
            let tk = if n == 1 {
                a.clone()
            } else {
                &a + (&b - &a) * BigRational::new(k.into(), (n - 1).into())
            };
            let label = json!({"t": format_rational(&tk)});
            (label, base.with_exact_t(tk))
        })
        .collect())
}

impl Op {
    fn run(&self, m: &WalkModel, o: &Options) -> Result<Output, Error> {
        match self {
            Op::Classify => classify(m),
            Op::Uniformize => uniformize(m),
            Op::Orbit => orbit(m, o),
            Op::Verify => {
                let rep = verify_functional_equation(m, o.order.unwrap_or(10))?;
                Ok(Output::Json(serde_json::to_value(rep).expect("serializable")))
            }
            Op::Enumerate => enumerate(m, o),
            Op::Sample => sample(m, o),
        }
    }
}

fn model_fields(m: &WalkModel, out: &mut serde_json::Map<String, Value>) {
    if let Value::Object(doc) = m.to_json() {
        out.extend(doc);
    }
    if let Some(ex) = m.exact_weights() {
        out.insert("raw_sum".into(), Value::String(format_rational(ex.raw_sum())));
    }
}

fn classify(m: &WalkModel) -> Result<Output, Error> {
    let report = genus_report(m)?;
    let mut out = match serde_json::to_value(&report).expect("serializable") {
        Value::Object(map) => map,
        _ => unreachable!("reports serialize to objects"),
    };
    out.insert("steps".into(), Value::String(crate::model::step_set(m).to_string()));
    if !report.degeneracy.is_degenerate() {
        let delta = |axis| -> Vec<f64> {
            discriminant(m, axis).coeffs.iter().map(|c| c.re).collect()
        };
        out.insert("delta1".into(), json!(delta(Axis::X)));
        out.insert("delta2".into(), json!(delta(Axis::Y)));
        match branch_points(m) {
            Ok(bp) => {
                out.insert("branch_points".into(), serde_json::to_value(bp).expect("serializable"));
            }
            Err(e) => {
                out.insert("branch_points_error".into(), error_json(&e));
            }
        }
    }
    model_fields(m, &mut out);
    Ok(Output::Json(Value::Object(out)))
}

fn uniformize(m: &WalkModel) -> Result<Output, Error> {
    let report = genus_report(m)?;
    if report.degeneracy.is_degenerate() {
        return Err(Error::DegenerateModel(report.degeneracy));
    }
    let v = if report.genus == Some(0) {
        let u = uniform_g0::uniformize_genus0(m)?;
        let mut v = serde_json::to_value(&u).expect("serializable");
        v["genus"] = json!(0);
        v["q_inverse"] = json!(1.0 / u.q);
        v
    } else {
        let u = uniform_g1::uniformize_genus1(m)?;
        let mut v = serde_json::to_value(&u).expect("serializable");
        v["genus"] = json!(1);
        v["omega3_over_omega2"] = json!(u.omega3 / u.omega2);
        v
    };
    Ok(Output::Json(v))
}

/// The starting point of an orbit: the given one, or a point above a fixed
/// generic `x`.
fn orbit_start(curve: &KernelCurve, o: &Options) -> Result<CurvePoint, Error> {
    match o.start {
        Some((x, y)) => Ok(CurvePoint::affine(x, y)),
        None => {
            let x = ProjPoint::affine(Complex64::new(0.37, 0.21));
            Ok(curve.points_over_x(x)?[0])
        }
    }
}

fn orbit(m: &WalkModel, o: &Options) -> Result<Output, Error> {
    let curve = KernelCurve::new(m)?;
    let start = orbit_start(&curve, o)?;
    let points = curve.orbit(&start, o.steps)?;
    if o.csv {
        return Ok(Output::Text(points_csv(&points)));
    }
    let report = sigma_order(m, &start, o.order.unwrap_or(100) as u32, o.tol)?;
    Ok(Output::Json(json!({
        "start": start,
        "orbit": points,
        "report": report,
        "t": m.t(),
    })))
}

fn enumerate(m: &WalkModel, o: &Options) -> Result<Output, Error> {
    let n = match (o.order, o.coeff) {
        (Some(n), _) => n,
        (None, Some((_, _, k))) => k,
        (None, None) => 10,
    };
    let q = walk_series(m, n)?;
    if let Some((i, j, k)) = o.coeff {
        let c = if k <= n { q.coeff(i, j, k) } else { BigRational::zero() };
        if o.csv {
            return Ok(Output::Text(format!("i,j,k,q\n{i},{j},{k},{}\n", format_rational(&c))));
        }
        return Ok(Output::Json(json!({
            "coeff": format!("{i},{j},{k}"),
            "value": format_rational(&c),
        })));
    }
    if o.csv {
        let mut s = String::from("i,j,k,q\n");
        for ((i, j, k), c) in q.iter() {
            s.push_str(&format!("{i},{j},{k},{}\n", format_rational(c)));
        }
        return Ok(Output::Text(s));
    }
    Ok(Output::Json(json!({"order": n, "terms": q.to_json()})))
}

fn sample(m: &WalkModel, o: &Options) -> Result<Output, Error> {
    let report = genus_report(m)?;
    if report.degeneracy.is_degenerate() {
        return Err(Error::DegenerateModel(report.degeneracy));
    }
    let (n, k) = o.grid;
    let csv = if report.genus == Some(0) {
        let u = uniform_g0::uniformize_genus0(m)?;
        uniform_g0::sample_csv(&u, &uniform_g0::polar_grid(n, k))
    } else {
        let u = uniform_g1::uniformize_genus1(m)?;
        uniform_g1::sample_csv(&u, &uniform_g1::parallelogram_grid(&u, n, k))
    };
    Ok(Output::Text(csv))
}
