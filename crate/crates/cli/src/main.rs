//! `slodowy` command-line front end.
//!
//! Every subcommand reads JSON (from `--input`, a path or inline text) and
//! prints a JSON report `{command, status, results, timing_ms}`. Exit code is
//! 0 on pass, 1 on a mathematical failure, 2 on bad input.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use slodowy::connection::{check_oper, normalize, slodowy_functor, LambdaConnection};
use slodowy::exact::parse_rational;
use slodowy::json::{
    gauge_to_json, lynch_from_json, lynch_to_json, matrix_from_json, matrix_to_json,
    multiplicities_to_json, oper_check_to_json, poly_to_json, slodowy_data_to_json, AlgebraJson,
    CoefficientsJson, ConnectionJson, MatrixJson, ModelCoefficientsJson, TripleJson,
};
use slodowy::liealg::MatrixLieAlgebra;
use slodowy::models::{build_model_oper, hitchin_map, model_triple, ModelDescriptor, ModelFamily};
use slodowy::sl2triples::{ad_h_grading, is_even, jm_complete, module_multiplicities, principal_triple, Sl2Triple};
use slodowy::slodowy::{lynch_compose, lynch_decompose, parabolic_data, slodowy_data};
use slodowy::suites::{
    hitchin_suite, random_model_coefficients, reference_table, rng_from_seed, roundtrip_suite, table_row,
    ModelContext, SuiteOutcome,
};
use slodowy::{Error, Rational};

#[derive(Parser, Debug)]
#[command(name = "slodowy", version, about = "Slodowy slices, JM parabolics and oper normal forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// JSON payload: a file path or inline JSON text.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 10)]
    trials: usize,
    #[arg(long = "degree-cap", global = true, default_value_t = 3)]
    degree_cap: usize,
    /// Model family, e.g. `sln_borel`, `tube_sl`, `so_partial_flag`.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    /// `λ` as `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Also write the report to this file.
    #[arg(long = "json-out", global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Complete a nilpotent `e` to an sl2-triple and report its grading.
    JmComplete,
    /// Centralizer, highest-weight spaces and exponents of a triple.
    SlodowyData,
    /// Lynch decomposition of `A` and/or composition of `parts`.
    Lynch,
    /// Build a connection from Slodowy or model coefficients.
    BuildOper,
    /// Gauge a connection into Slodowy normal form.
    NormalizeOper,
    /// Test the oper condition.
    CheckOper,
    /// Model opers.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Hitchin map of a connection, or the section/map inversion suite.
    Hitchin,
    /// Seeded build, gauge, normalize round trips.
    RoundtripSuite,
    /// Compare computed sl2-module multiplicities with the reference table.
    TableCheck,
}

#[derive(Subcommand, Debug, Clone)]
enum ModelAction {
    Triple,
    TableCheck,
    Build,
}

enum Failure {
    Math(Value),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(_)
            | Error::DimensionMismatch(_)
            | Error::UnsupportedFamily(_)
            | Error::BadPartition(_)
            | Error::SymmetryViolation(_)
            | Error::NotInAlgebra => Failure::Input(e.to_string()),
            other => Failure::Math(json!({ "error": other.to_string() })),
        }
    }
}

/// `Ok((passed, results))`.
type Outcome = Result<(bool, Value), Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read_input(opts: &Opts) -> Result<Value, Failure> {
    let raw = opts
        .input
        .as_deref()
        .ok_or_else(|| input_error("--input is required"))?;
    let trimmed = raw.trim_start();
    let (text, origin) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        (raw.to_string(), "inline input".to_string())
    } else {
        let text = std::fs::read_to_string(raw).map_err(|e| input_error(format!("{raw}: {e}")))?;
        (text, raw.to_string())
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| input_error(format!("{origin}: {e}")))?;
    // a report from an earlier run: use its results
    match v {
        Value::Object(mut o) if o.contains_key("command") && o.contains_key("status") => {
            Ok(o.remove("results").unwrap_or(Value::Null))
        }
        v => Ok(v),
    }
}

fn decode<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| input_error(format!("{what}: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

fn lambda(opts: &Opts) -> Result<Rational, Failure> {
    match &opts.lambda {
        Some(s) => parse_rational(s).map_err(|e| input_error(format!("--lambda: {e}"))),
        None => Ok(Rational::from_integer(1.into())),
    }
}

fn descriptor(opts: &Opts) -> Result<Option<ModelDescriptor>, Failure> {
    let Some(fam) = &opts.family else {
        return Ok(None);
    };
    let family = ModelFamily::parse(fam)?;
    let n = opts.n.ok_or_else(|| input_error("--n is required with --family"))?;
    Ok(Some(ModelDescriptor::new(family, n, opts.k)?))
}

fn require_descriptor(opts: &Opts) -> Result<ModelDescriptor, Failure> {
    descriptor(opts)?.ok_or_else(|| input_error("--family and --n are required"))
}

/// Triple from `--family`, or from the payload: `{algebra, f, h, e}`,
/// `{algebra, e}` (completed), `{triple: ...}`, or `{algebra}` (principal).
fn resolve_triple(v: Option<&Value>, algebra: Option<Arc<MatrixLieAlgebra>>, opts: &Opts) -> Result<Sl2Triple, Failure> {
    if let Some(d) = descriptor(opts)? {
        let t = model_triple(&d)?;
        if let Some(g) = &algebra {
            if **g != **t.algebra() {
                return Err(input_error("connection algebra differs from the model algebra"));
            }
        }
        return Ok(t);
    }
    let v = v.ok_or_else(|| input_error("no triple: pass --family or an input payload"))?;
    if let Some(t) = field(v, "triple") {
        return resolve_triple(Some(t), algebra, opts);
    }
    let g = match (algebra, field(v, "algebra")) {
        (Some(g), _) => g,
        (None, Some(a)) => Arc::new(decode::<AlgebraJson>(a, "algebra")?.to_algebra()?),
        (None, None) => return Err(input_error("missing \"algebra\"")),
    };
    let mat = |key: &str| -> Result<Option<slodowy::QMatrix>, Failure> {
        match field(v, key) {
            Some(m) => Ok(Some(matrix_from_json(&decode::<MatrixJson>(m, key)?)?)),
            None => Ok(None),
        }
    };
    match (mat("f")?, mat("h")?, mat("e")?) {
        (Some(f), Some(h), Some(e)) => Ok(Sl2Triple::new(g, f, h, e)?),
        (None, None, Some(e)) => Ok(jm_complete(&e, &g)?),
        (None, None, None) => Ok(principal_triple(&g)?),
        _ => Err(input_error("give all of f, h, e, or e alone")),
    }
}

fn triple_report(t: &Sl2Triple) -> Result<Value, Failure> {
    let gr = ad_h_grading(t)?;
    let dims: Map<String, Value> = gr.weights().iter().map(|&j| (j.to_string(), json!(gr.dim(j)))).collect();
    Ok(json!({
        "triple": TripleJson::from_triple(t),
        "is_even": is_even(t),
        "grading": dims,
        "multiplicities": multiplicities_to_json(&module_multiplicities(t)?),
    }))
}

fn read_connection(v: &Value, opts: &Opts) -> Result<(LambdaConnection, Sl2Triple), Failure> {
    let cj: ConnectionJson = decode(field(v, "connection").unwrap_or(v), "connection")?;
    let g = Arc::new(cj.algebra.to_algebra()?);
    let t = resolve_triple(Some(v), Some(g), opts)?;
    let conn = cj.to_connection(Some(t.algebra().clone()))?;
    Ok((conn, t))
}

fn suite_result(s: &SuiteOutcome) -> (bool, Value) {
    (s.all_passed(), json!(s))
}

fn run(cmd: &Command, opts: &Opts) -> Outcome {
    match cmd {
        Command::JmComplete => {
            let v = read_input(opts)?;
            let t = resolve_triple(Some(&v), None, opts)?;
            Ok((true, triple_report(&t)?))
        }
        Command::SlodowyData => {
            let v = if opts.input.is_some() { Some(read_input(opts)?) } else { None };
            let t = resolve_triple(v.as_ref(), None, opts)?;
            let sd = slodowy_data(&t)?;
            let mut out = slodowy_data_to_json(&sd);
            out["multiplicities"] = multiplicities_to_json(&module_multiplicities(&t)?);
            Ok((true, out))
        }
        Command::Lynch => {
            let v = read_input(opts)?;
            let sd = slodowy_data(&resolve_triple(Some(&v), None, opts)?)?;
            let mut out = Map::new();
            let mut ok = true;
            if let Some(a) = field(&v, "A") {
                let a = matrix_from_json(&decode::<MatrixJson>(a, "A")?)?;
                let parts = lynch_decompose(&a, &sd)?;
                let back = lynch_compose(&parts, &sd)?;
                ok &= back == a;
                out.insert("decomposed".into(), lynch_to_json(&parts));
                out.insert("recomposes".into(), json!(back == a));
            }
            if let Some(p) = field(&v, "parts") {
                let parts = lynch_from_json(p)?;
                let a = lynch_compose(&parts, &sd)?;
                let again = lynch_decompose(&a, &sd)?;
                ok &= again == parts;
                out.insert("composed".into(), json!(matrix_to_json(&a)));
                out.insert("redecomposes".into(), json!(again == parts));
            }
            if out.is_empty() {
                return Err(input_error("lynch needs \"A\" or \"parts\""));
            }
            Ok((ok, Value::Object(out)))
        }
        Command::BuildOper => {
            let v = read_input(opts)?;
            let conn = match descriptor(opts)? {
                Some(d) => {
                    let mc: ModelCoefficientsJson = decode(field(&v, "coefficients").unwrap_or(&v), "coefficients")?;
                    build_model_oper(&d, lambda(opts)?, &mc.to_model()?)?
                }
                None => {
                    let sd = slodowy_data(&resolve_triple(Some(&v), None, opts)?)?;
                    let c = field(&v, "coefficients").ok_or_else(|| input_error("missing \"coefficients\""))?;
                    let coeffs = decode::<CoefficientsJson>(c, "coefficients")?.to_coefficients()?;
                    slodowy_functor(&sd, &coeffs)?
                }
            };
            Ok((true, json!({ "connection": ConnectionJson::from_connection(&conn) })))
        }
        Command::NormalizeOper => {
            let v = read_input(opts)?;
            let (conn, t) = read_connection(&v, opts)?;
            let (sd, pd) = (slodowy_data(&t)?, parabolic_data(&t)?);
            match normalize(&conn, &sd, &pd) {
                Ok((g, c)) => Ok((
                    true,
                    json!({
                        "gauge": gauge_to_json(&g),
                        "coefficients": CoefficientsJson::from_coefficients(&c),
                    }),
                )),
                Err(e @ Error::NotAnOper(_)) => Ok((
                    false,
                    json!({ "error": e.to_string(), "oper_check": oper_check_to_json(&check_oper(&conn, &pd)) }),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckOper => {
            let v = read_input(opts)?;
            let (conn, t) = read_connection(&v, opts)?;
            let c = check_oper(&conn, &parabolic_data(&t)?);
            Ok((c.is_oper, oper_check_to_json(&c)))
        }
        Command::Model { action } => match action {
            ModelAction::Triple => {
                let t = model_triple(&require_descriptor(opts)?)?;
                Ok((true, triple_report(&t)?))
            }
            ModelAction::TableCheck => table_check(opts),
            ModelAction::Build => {
                let d = require_descriptor(opts)?;
                let coeffs = if opts.input.is_some() {
                    let v = read_input(opts)?;
                    decode::<ModelCoefficientsJson>(field(&v, "coefficients").unwrap_or(&v), "coefficients")?
                        .to_model()?
                } else {
                    random_model_coefficients(&d, &mut rng_from_seed(opts.seed), opts.degree_cap)
                };
                let conn = build_model_oper(&d, lambda(opts)?, &coeffs)?;
                Ok((
                    true,
                    json!({
                        "coefficients": ModelCoefficientsJson::from_model(&coeffs),
                        "connection": ConnectionJson::from_connection(&conn),
                    }),
                ))
            }
        },
        Command::Hitchin => {
            if opts.input.is_some() {
                let v = read_input(opts)?;
                let cj: ConnectionJson = decode(field(&v, "connection").unwrap_or(&v), "connection")?;
                let p = hitchin_map(&cj.to_connection(None)?)?;
                Ok((true, json!({ "invariants": p.iter().map(poly_to_json).collect::<Vec<_>>() })))
            } else {
                let n = opts.n.ok_or_else(|| input_error("--n or --input is required"))?;
                let g = Arc::new(MatrixLieAlgebra::sl(n)?);
                let sd = slodowy_data(&principal_triple(&g)?)?;
                Ok(suite_result(&hitchin_suite(&sd, opts.trials, opts.seed, opts.degree_cap)))
            }
        }
        Command::RoundtripSuite => {
            let ctx = ModelContext::new(require_descriptor(opts)?)?;
            Ok(suite_result(&roundtrip_suite(&ctx, &lambda(opts)?, opts.trials, opts.seed, opts.degree_cap)))
        }
        Command::TableCheck => table_check(opts),
    }
}

fn table_check(opts: &Opts) -> Outcome {
    let rows = match descriptor(opts)? {
        Some(d) => vec![table_row(&d)?],
        None => reference_table()?,
    };
    let ok = rows.iter().all(|r| r.matches);
    Ok((ok, json!(rows)))
}

fn command_echo(cmd: &Command, opts: &Opts) -> Value {
    let name = match cmd {
        Command::JmComplete => "jm-complete".to_string(),
        Command::SlodowyData => "slodowy-data".into(),
        Command::Lynch => "lynch".into(),
        Command::BuildOper => "build-oper".into(),
        Command::NormalizeOper => "normalize-oper".into(),
        Command::CheckOper => "check-oper".into(),
        Command::Model { action } => match action {
            ModelAction::Triple => "model triple".into(),
            ModelAction::TableCheck => "model table-check".into(),
            ModelAction::Build => "model build".into(),
        },
        Command::Hitchin => "hitchin".into(),
        Command::RoundtripSuite => "roundtrip-suite".into(),
        Command::TableCheck => "table-check".into(),
    };
    json!({
        "name": name,
        "input": opts.input,
        "seed": opts.seed,
        "trials": opts.trials,
        "degree_cap": opts.degree_cap,
        "family": opts.family,
        "n": opts.n,
        "k": opts.k,
        "lambda": opts.lambda,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli.command, &cli.opts);
    let timing_ms = start.elapsed().as_millis() as u64;
    let (status, results, code) = match outcome {
        Ok((true, r)) => ("pass", r, 0),
        Ok((false, r)) => ("fail", r, 1),
        Err(Failure::Math(r)) => ("fail", r, 1),
        Err(Failure::Input(msg)) => ("error", json!({ "error": msg }), 2),
    };
    let report = json!({
        "command": command_echo(&cli.command, &cli.opts),
        "status": status,
        "results": results,
        "timing_ms": timing_ms,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.opts.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
