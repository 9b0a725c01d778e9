//! Command-line front end.
//!
//! Exit codes: 0 for any computed result (including `not_classical`), 2 for
//! usage and input errors, 3 for internal errors.

use std::fs;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{
    classify, necessary_check, necessary_json, necessary_text, pearson_from_head, pearson_json, pearson_text,
    predict_coefficients, ClassifyOptions, Head,
};
use crate::error::Error;
use crate::expr::{parse_poly, ExprSource};
use crate::families::{Family, FamilySource};
use crate::scalar::{Float, QParam, Rational, Scalar};
use crate::symlaurent::{dq_apply, sq_apply};
use crate::ttrr::{CoeffSource, Table, TableDoc};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "awclass",
    version,
    about = "Decide whether a recurrence defines a classical OPS on a q-quadratic lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
struct LatticeArgs {
    /// q^(1/2) as a rational, e.g. 1/2
    #[arg(long = "sqrt-q")]
    sqrt_q: Option<String>,
    /// q as a decimal (float backend only)
    #[arg(long = "q")]
    q: Option<String>,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// Relative tolerance of the float backend
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Clone, Args, Default)]
struct SourceArgs {
    /// Built-in family: aw, cqh, asc, cbqh or remark
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated family parameters, e.g. "1/2,-1/2,1/3,0"
    #[arg(long)]
    params: Option<String>,
    /// Closed form of B_n in n and q
    #[arg(long = "B-expr", allow_hyphen_values = true)]
    b_expr: Option<String>,
    /// Closed form of C_n (n >= 1) in n and q
    #[arg(long = "C-expr", allow_hyphen_values = true)]
    c_expr: Option<String>,
    /// JSON coefficient table
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full classification verdict
    Classify {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 12)]
        order: usize,
        /// Also evaluate the Pearson moment residuals
        #[arg(long)]
        validate_residuals: bool,
        /// Classify every *.json table in a directory
        #[arg(long, conflicts_with_all = ["family", "b_expr", "c_expr", "table"])]
        batch: Option<PathBuf>,
    },
    /// Pearson pair from the head coefficients
    Pearson {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        source: SourceArgs,
        /// "B0,B1,C1,C2"
        #[arg(long, allow_hyphen_values = true)]
        head: Option<String>,
    },
    /// Necessary difference-equation test
    Necessary {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Predicted coefficients of the classical OPS with a given head
    Generate {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// "B0,B1,C1,C2"
        #[arg(long, allow_hyphen_values = true)]
        head: String,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Apply the Askey-Wilson operator D_q to a polynomial in x
    Dq {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Apply the averaging operator S_q to a polynomial in x
    Sq {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Write the coefficients of a source as a JSON table
    Dump {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(Error),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(m) => CliError::Internal(m),
            other => CliError::Input(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Input(e) => format!("error: {e}"),
            CliError::Internal(m) => format!("internal error: {m}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (program name first), runs the subcommand and writes the
/// report to `out`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| dispatch(cli.command)));
    match result {
        Ok(Ok(report)) => {
            let _ = writeln!(out, "{}", report.trim_end());
            EXIT_OK
        }
        Ok(Err(e)) => {
            let _ = writeln!(err, "{}", e.message());
            e.exit_code()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

enum Lattice {
    Exact(QParam<Rational>),
    Float(QParam<Float>),
}

/// Resolves the lattice from the flags, falling back to `q_sqrt` of an input table.
fn lattice(args: &LatticeArgs, table_q_sqrt: Option<&str>) -> CliResult<Lattice> {
    let sqrt_q = args.sqrt_q.as_deref().or(table_q_sqrt);
    match args.backend {
        BackendArg::Exact => {
            if args.q.is_some() {
                return Err(CliError::Usage("--q is only accepted with --backend float; use --sqrt-q".into()));
            }
            let text = sqrt_q.ok_or_else(|| CliError::Usage("the exact backend requires --sqrt-q".into()))?;
            Ok(Lattice::Exact(QParam::exact_from_text(text)?))
        }
        BackendArg::Float => match (sqrt_q, &args.q) {
            (Some(_), Some(_)) if args.sqrt_q.is_some() => {
                Err(CliError::Usage("give either --sqrt-q or --q, not both".into()))
            }
            (_, Some(q)) => {
                let q: f64 = q.trim().parse().map_err(|_| Error::NumberParse(q.clone()))?;
                Ok(Lattice::Float(QParam::float_from_q(q, args.tol)?))
            }
            (Some(s), None) => {
                let s = Float::parse_text(s)?;
                Ok(Lattice::Float(QParam::float(s.re, args.tol)?))
            }
            (None, None) => Err(CliError::Usage("the float backend requires --sqrt-q or --q".into())),
        },
    }
}

fn read_table(path: &Path) -> CliResult<TableDoc> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(Error::Table(format!("cannot read {}: {e}", path.display()))))?;
    Ok(TableDoc::from_json(&text)?)
}

fn parse_list<S: Scalar>(text: &str) -> CliResult<Vec<S>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(text.split(',').map(S::parse_text).collect::<Result<Vec<_>, _>>()?)
}

fn parse_head<S: Scalar>(text: &str) -> CliResult<Head<S>> {
    let v = parse_list::<S>(text)?;
    let [b0, b1, c1, c2]: [S; 4] = v
        .try_into()
        .map_err(|_| CliError::Usage("--head takes exactly four values B0,B1,C1,C2".into()))?;
    Ok(Head { b0, b1, c1, c2 })
}

fn source_count(source: &SourceArgs) -> usize {
    [source.family.is_some(), source.b_expr.is_some() || source.c_expr.is_some(), source.table.is_some()]
        .iter()
        .filter(|x| **x)
        .count()
}

fn build_source<S: Scalar>(
    source: &SourceArgs,
    doc: Option<&TableDoc>,
    qp: &QParam<S>,
) -> CliResult<Box<dyn CoeffSource<S>>> {
    if source_count(source) != 1 {
        return Err(CliError::Usage(
            "give exactly one source: --family, --B-expr with --C-expr, or --table".into(),
        ));
    }
    if source.params.is_some() && source.family.is_none() {
        return Err(CliError::Usage("--params requires --family".into()));
    }
    if let Some(name) = &source.family {
        let params = parse_list::<S>(source.params.as_deref().unwrap_or(""))?;
        let family = Family::from_name(name, &params)?;
        return Ok(Box::new(FamilySource::new(family, qp.clone())?));
    }
    if let Some(doc) = doc {
        return Ok(doc.into_source(qp)?);
    }
    match (&source.b_expr, &source.c_expr) {
        (Some(b), Some(c)) => Ok(Box::new(ExprSource::parse(b, c, qp.clone())?)),
        _ => Err(CliError::Usage("--B-expr and --C-expr must be given together".into())),
    }
}

fn dispatch(command: Command) -> CliResult<String> {
    match command {
        Command::Classify { lattice: l, source, order, validate_residuals, batch: Some(dir) } => {
            if source_count(&source) != 0 {
                return Err(CliError::Usage("--batch cannot be combined with a source".into()));
            }
            batch(&l, &dir, &ClassifyOptions { order, validate_residuals })
        }
        Command::Classify { lattice: l, source, order, validate_residuals, batch: None } => {
            let doc = source.table.as_deref().map(read_table).transpose()?;
            let opts = ClassifyOptions { order, validate_residuals };
            match lattice(&l, doc.as_ref().and_then(|d| d.q_sqrt.as_deref()))? {
                Lattice::Exact(qp) => run_classify(&l, &source, doc.as_ref(), &qp, &opts),
                Lattice::Float(qp) => run_classify(&l, &source, doc.as_ref(), &qp, &opts),
            }
        }
        Command::Pearson { lattice: l, source, head } => {
            let doc = source.table.as_deref().map(read_table).transpose()?;
            match lattice(&l, doc.as_ref().and_then(|d| d.q_sqrt.as_deref()))? {
                Lattice::Exact(qp) => run_pearson(&l, &source, doc.as_ref(), head.as_deref(), &qp),
                Lattice::Float(qp) => run_pearson(&l, &source, doc.as_ref(), head.as_deref(), &qp),
            }
        }
        Command::Necessary { lattice: l, source, order } => {
            let doc = source.table.as_deref().map(read_table).transpose()?;
            match lattice(&l, doc.as_ref().and_then(|d| d.q_sqrt.as_deref()))? {
                Lattice::Exact(qp) => run_necessary(&l, &source, doc.as_ref(), order, &qp),
                Lattice::Float(qp) => run_necessary(&l, &source, doc.as_ref(), order, &qp),
            }
        }
        Command::Generate { lattice: l, head, order } => match lattice(&l, None)? {
            Lattice::Exact(qp) => run_generate(&l, &head, order, &qp),
            Lattice::Float(qp) => run_generate(&l, &head, order, &qp),
        },
        Command::Dq { lattice: l, poly } => match lattice(&l, None)? {
            Lattice::Exact(qp) => run_operator(&l, &poly, &qp, true),
            Lattice::Float(qp) => run_operator(&l, &poly, &qp, false),
        }
        .map(|s| s.replace("{op}", "D_q")),
        Command::Sq { lattice: l, poly } => match lattice(&l, None)? {
            Lattice::Exact(qp) => run_operator(&l, &poly, &qp, false),
            Lattice::Float(qp) => run_operator(&l, &poly, &qp, false),
        }
        .map(|s| s.replace("{op}", "S_q")),
        Command::Dump { lattice: l, source, order } => {
            let doc = source.table.as_deref().map(read_table).transpose()?;
            match lattice(&l, doc.as_ref().and_then(|d| d.q_sqrt.as_deref()))? {
                Lattice::Exact(qp) => run_dump(&source, doc.as_ref(), order, &qp),
                Lattice::Float(qp) => run_dump(&source, doc.as_ref(), order, &qp),
            }
        }
    }
}

fn q_sqrt_text<S: Scalar>(qp: &QParam<S>) -> String {
    qp.s().to_text()
}

fn render(format: Format, json: Value, text: String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("report serializes"),
        Format::Text => text,
    }
}

fn run_classify<S: Scalar>(
    l: &LatticeArgs,
    source: &SourceArgs,
    doc: Option<&TableDoc>,
    qp: &QParam<S>,
    opts: &ClassifyOptions,
) -> CliResult<String> {
    let src = build_source(source, doc, qp)?;
    let verdict = classify(src.as_ref(), qp, opts)?;
    Ok(render(l.format, verdict.to_json(), verdict.to_text()))
}

fn run_pearson<S: Scalar>(
    l: &LatticeArgs,
    source: &SourceArgs,
    doc: Option<&TableDoc>,
    head: Option<&str>,
    qp: &QParam<S>,
) -> CliResult<String> {
    let head = match head {
        Some(text) => {
            if source_count(source) != 0 {
                return Err(CliError::Usage("--head cannot be combined with a source".into()));
            }
            parse_head::<S>(text)?
        }
        None => Head::from_source(build_source(source, doc, qp)?.as_ref())?,
    };
    let pp = pearson_from_head(head.b0, head.b1, head.c1, head.c2, qp)?;
    Ok(render(l.format, pearson_json(&pp), pearson_text(&pp)))
}

fn run_necessary<S: Scalar>(
    l: &LatticeArgs,
    source: &SourceArgs,
    doc: Option<&TableDoc>,
    order: usize,
    qp: &QParam<S>,
) -> CliResult<String> {
    let src = build_source(source, doc, qp)?;
    let (b, c) = src.coefficients(order)?;
    let report = necessary_check(&b, &c, qp, order)?;
    let mut json = necessary_json(&report);
    json["passes"] = json!(report.passes());
    let text = format!("{}passes: {}\n", necessary_text(&report), report.passes());
    Ok(render(l.format, json, text))
}

fn run_generate<S: Scalar>(l: &LatticeArgs, head: &str, order: usize, qp: &QParam<S>) -> CliResult<String> {
    let head = parse_head::<S>(head)?;
    let pp = pearson_from_head(head.b0.clone(), head.b1, head.c1.clone(), head.c2, qp)?;
    let (bs, cs) = predict_coefficients(pp.a.clone(), pp.b.clone(), head.b0, head.c1, qp, order)?;
    let table = Table::new(bs, cs)?;
    let mut json = serde_json::to_value(TableDoc::from_table(&table, Some(q_sqrt_text(qp)))).expect("table");
    json["pearson"] = pearson_json(&pp);
    let mut text = String::new();
    for (n, v) in table.b_values().iter().enumerate() {
        text.push_str(&format!("B_{n} = {}\n", v.to_text()));
    }
    for (n, v) in table.c_values().iter().enumerate() {
        text.push_str(&format!("C_{} = {}\n", n + 1, v.to_text()));
    }
    Ok(render(l.format, json, text))
}

fn run_operator<S: Scalar>(l: &LatticeArgs, poly: &str, qp: &QParam<S>, dq: bool) -> CliResult<String> {
    let _ = dq;
    let p = parse_poly(poly).map_err(Error::from)?.to_xpoly::<S>()?;
    let image = if dq { dq_apply(&p, qp) } else { sq_apply(&p, qp) };
    let json = json!({ "input": p.to_json_coeffs(), "output": image.to_json_coeffs(), "text": image.to_text() });
    Ok(render(l.format, json, format!("{{op}}({p}) = {image}\n")))
}

fn run_dump<S: Scalar>(source: &SourceArgs, doc: Option<&TableDoc>, order: usize, qp: &QParam<S>) -> CliResult<String> {
    let src = build_source(source, doc, qp)?;
    let table = Table::from_source(src.as_ref(), order)?;
    Ok(TableDoc::from_table(&table, Some(q_sqrt_text(qp))).to_json())
}

fn batch(l: &LatticeArgs, dir: &Path, opts: &ClassifyOptions) -> CliResult<String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Input(Error::Table(format!("cannot read {}: {e}", dir.display()))))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    let results: Vec<(String, CliResult<Value>)> = files
        .par_iter()
        .map(|path| {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let result = (|| {
                let doc = read_table(path)?;
                let source = SourceArgs { table: Some(path.clone()), ..SourceArgs::default() };
                let verdict = match lattice(l, doc.q_sqrt.as_deref())? {
                    Lattice::Exact(qp) => classify(build_source(&source, Some(&doc), &qp)?.as_ref(), &qp, opts)?.to_json(),
                    Lattice::Float(qp) => classify(build_source(&source, Some(&doc), &qp)?.as_ref(), &qp, opts)?.to_json(),
                };
                Ok(verdict)
            })();
            (name, result)
        })
        .collect();

    if let Some((name, Err(e))) = results.iter().find(|(_, r)| r.is_err()) {
        return Err(match e {
            CliError::Usage(m) => CliError::Usage(format!("{name}: {m}")),
            CliError::Input(err) => CliError::Input(Error::Table(format!("{name}: {err}"))),
            CliError::Internal(m) => CliError::Internal(format!("{name}: {m}")),
        });
    }
    let entries: Vec<(String, Value)> = results.into_iter().map(|(n, r)| (n, r.unwrap_or(Value::Null))).collect();
    let json = Value::Array(entries.iter().map(|(n, v)| json!({ "file": n, "verdict": v })).collect());
    let text = entries
        .iter()
        .map(|(n, v)| format!("{n}: {}\n", v["status"].as_str().unwrap_or("?")))
        .collect();
    Ok(render(l.format, json, text))
}
