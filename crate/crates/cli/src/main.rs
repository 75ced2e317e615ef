use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pareto_gauge::demos::{self, Table};
use pareto_gauge::indexes::is_degenerate_jain;
use pareto_gauge::inefficiency::{inefficiency_report, sweep_family, Measure, SweepPolicy};
use pareto_gauge::pareto::{eps_approx_construct, verify_eps_approx};
use pareto_gauge::policies::smn_closed_form;
use pareto_gauge::verify::run_suite;
use pareto_gauge::{
    apply_policy, eval_index, pareto_filter, FiniteUtilitySet, IndexSpec, PolicySpec, SmnAllocation, SmnFamily,
    UtilityPoint,
};
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 42;
const SEED_VAR: &str = "PARETO_GAUGE_SEED";

#[derive(Parser)]
#[command(name = "pareto-gauge", version, about = "Fairness indexes, Pareto fronts and inefficiency measures")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Evaluate an index at every point of a set.
    Index {
        #[arg(long)]
        input: String,
        #[arg(long)]
        index: String,
    },
    /// Closed-form allocation on S_{M,N}, or a policy's choice in a set.
    Allocate {
        #[arg(long, conflicts_with = "input")]
        smn: Option<String>,
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        policy: String,
    },
    /// Pareto front of a set, or an ε-approximation of it with --eps.
    Pareto {
        #[arg(long)]
        input: String,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// ε-approximation of the front, with its coverage check.
    EpsApprox {
        #[arg(long)]
        input: String,
        #[arg(long)]
        eps: f64,
    },
    /// Price of anarchy, strict-domination factor and topological measure of β.
    Ineff {
        #[arg(long)]
        input: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        index: Option<String>,
    },
    /// One measure across S_{M,N} for a list of M values, as CSV.
    Sweep {
        #[arg(long)]
        smn: String,
        #[arg(long = "Ms", value_delimiter = ',', required = true)]
        ms: Vec<f64>,
        #[arg(long)]
        policy: String,
        #[arg(long, default_value = "poa-sum")]
        measure: String,
        /// Grid points per axis added to the closed forms; 0 disables the grid.
        #[arg(long, default_value_t = 0)]
        resolution: usize,
    },
    /// Run one counterexample demo, or all of them.
    Demo {
        name: Option<String>,
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Run the property suite.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    /// Malformed input; exit status 2.
    Input(String),
    /// A check or demo did not pass; exit status 1.
    Check,
}

type Outcome = Result<(), Failure>;

fn bad(field: &str) -> impl Fn(pareto_gauge::Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{field}: {e}"))
}

/// Rounds to 10 significant digits.
fn round10(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.9e}").parse().expect("formatted float")
    } else {
        x
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = round10(n.as_f64().expect("float"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn emit<T: Serialize>(value: &T) {
    let v = round_value(serde_json::to_value(value).expect("serializable"));
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
}

/// A file path or inline JSON.
fn read_json(field: &str, text: &str) -> Result<Value, Failure> {
    let t = text.trim_start();
    let body = if t.starts_with('{') || t.starts_with('[') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| Failure::Input(format!("{field}: cannot read {text:?}: {e}")))?
    };
    serde_json::from_str(&body).map_err(|e| Failure::Input(format!("{field}: {e}")))
}

/// `{"points": [[…], …]}` or a bare array of points.
fn load_set(text: &str) -> Result<FiniteUtilitySet, Failure> {
    let v = read_json("--input", text)?;
    let v = if v.is_array() { json!({ "points": v }) } else { v };
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("--input: {e}")))
}

fn load_point(field: &str, text: &str) -> Result<UtilityPoint, Failure> {
    serde_json::from_value(read_json(field, text)?).map_err(|e| Failure::Input(format!("{field}: {e}")))
}

/// `M=2,N=3`; either key may be missing.
fn parse_smn(text: &str) -> Result<(Option<f64>, Option<usize>), Failure> {
    let (mut m, mut n) = (None, None);
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fail = || Failure::Input(format!("--smn: expected M=<real>,N=<int>, got {part:?}"));
        let (k, v) = part.split_once('=').ok_or_else(fail)?;
        match k.trim() {
            "M" => m = Some(v.trim().parse().map_err(|_| fail())?),
            "N" => n = Some(v.trim().parse().map_err(|_| fail())?),
            _ => return Err(fail()),
        }
    }
    Ok((m, n))
}

fn cmd_index(input: &str, index: &str) -> Outcome {
    let u = load_set(input)?;
    let f = IndexSpec::parse(index).map_err(bad("--index"))?;
    let mut values = Vec::new();
    for p in u.iter() {
        let row = match eval_index(&f, p) {
            Ok(v) => json!({ "point": p, "value": v, "degenerate_jain": f == IndexSpec::Jain && is_degenerate_jain(p) }),
            Err(pareto_gauge::Error::Domain(why)) => json!({ "point": p, "value": null, "outside_domain": why }),
            Err(e) => return Err(bad("--index")(e)),
        };
        values.push(row);
    }
    emit(&json!({ "index": f, "values": values }));
    Ok(())
}

fn cmd_allocate(smn: Option<&str>, input: Option<&str>, policy: &str) -> Outcome {
    let point = match (smn, input) {
        (Some(smn), _) => {
            let (m, n) = parse_smn(smn)?;
            let m = m.ok_or_else(|| Failure::Input("--smn: M is required".into()))?;
            let n = n.ok_or_else(|| Failure::Input("--smn: N is required".into()))?;
            let f = SmnFamily::new(m, n).map_err(bad("--smn"))?;
            let which = SmnAllocation::parse(policy)
                .ok_or_else(|| Failure::Input(format!("--policy: expected sum, min or product, got {policy:?}")))?;
            smn_closed_form(which, f)
        }
        (None, Some(input)) => {
            let u = load_set(input)?;
            let p = PolicySpec::parse(policy).map_err(bad("--policy"))?;
            apply_policy(&p, &u).map_err(bad("--policy"))?
        }
        (None, None) => return Err(Failure::Input("allocate needs --smn or --input".into())),
    };
    emit(&json!({ "point": point }));
    Ok(())
}

fn cmd_eps(input: &str, eps: f64) -> Outcome {
    let u = load_set(input)?;
    let s = eps_approx_construct(&u, eps).map_err(bad("--eps"))?;
    let check = verify_eps_approx(&s, &u, eps).map_err(bad("--eps"))?;
    emit(&json!({ "eps": eps, "points": s.points(), "source_size": u.len(), "holds": check.holds }));
    if check.holds {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_ineff(input: &str, beta: &str, index: Option<&str>) -> Outcome {
    let u = load_set(input)?;
    let beta = load_point("--beta", beta)?;
    let f = index.map(IndexSpec::parse).transpose().map_err(bad("--index"))?;
    let report = inefficiency_report(&beta, &u, f.as_ref()).map_err(bad("--beta"))?;
    emit(&report);
    Ok(())
}

fn cmd_sweep(smn: &str, ms: &[f64], policy: &str, measure: &str, resolution: usize) -> Outcome {
    let (m, n) = parse_smn(smn)?;
    if m.is_some() {
        return Err(Failure::Input("--smn: M comes from --Ms in a sweep".into()));
    }
    let n = n.ok_or_else(|| Failure::Input("--smn: N is required".into()))?;
    let policy = match SmnAllocation::parse(policy) {
        Some(a) => SweepPolicy::ClosedForm(a),
        None => SweepPolicy::Policy(PolicySpec::parse(policy).map_err(bad("--policy"))?),
    };
    let measure = Measure::parse(measure).map_err(bad("--measure"))?;
    let rows = sweep_family(&policy, &measure, ms, n, resolution).map_err(bad("--Ms"))?;
    println!("M,N,policy,measure,value");
    for r in rows {
        println!("{},{},{},{},{}", round10(r.m), r.n, r.policy, r.measure, round10(r.value));
    }
    Ok(())
}

fn rounded(t: &Table) -> Table {
    Table {
        columns: t.columns.clone(),
        rows: t.rows.iter().map(|r| r.iter().copied().map(round10).collect()).collect(),
    }
}

fn cmd_demo(name: Option<&str>, csv_dir: Option<&PathBuf>) -> Outcome {
    let reports = match name {
        Some(n) => demos::run_demo(n).map_err(bad("name"))?,
        None => demos::run_all_demos().map_err(|e| Failure::Input(e.to_string()))?,
    };
    if let Some(dir) = csv_dir {
        let io = |e: std::io::Error| Failure::Input(format!("--csv-dir: {e}"));
        std::fs::create_dir_all(dir).map_err(io)?;
        for r in &reports {
            for (artifact, table) in &r.artifacts {
                let csv = rounded(table).to_csv().map_err(bad("--csv-dir"))?;
                std::fs::write(dir.join(format!("{}_{artifact}.csv", r.name)), csv).map_err(io)?;
            }
        }
    }
    for r in &reports {
        eprintln!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.narrative);
    }
    emit(&reports);
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn default_seed() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{SEED_VAR}: expected an unsigned integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_verify(seed: Option<u64>) -> Outcome {
    let seed = match seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let results = run_suite(seed);
    for r in &results {
        eprintln!(
            "{} {}::{} — {} ({})",
            if r.passed { "PASS" } else { "FAIL" },
            r.module,
            r.name,
            r.claim,
            r.detail
        );
    }
    let passed = results.iter().all(|r| r.passed);
    emit(&json!({ "seed": seed, "passed": passed, "properties": results }));
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.verb {
        Verb::Index { input, index } => cmd_index(&input, &index),
        Verb::Allocate { smn, input, policy } => cmd_allocate(smn.as_deref(), input.as_deref(), &policy),
        Verb::Pareto { input, eps: Some(eps) } => cmd_eps(&input, eps),
        Verb::Pareto { input, eps: None } => {
            emit(&pareto_filter(&load_set(&input)?));
            Ok(())
        }
        Verb::EpsApprox { input, eps } => cmd_eps(&input, eps),
        Verb::Ineff { input, beta, index } => cmd_ineff(&input, &beta, index.as_deref()),
        Verb::Sweep {
            smn,
            ms,
            policy,
            measure,
            resolution,
        } => cmd_sweep(&smn, &ms, &policy, &measure, resolution),
        Verb::Demo { name, csv_dir } => cmd_demo(name.as_deref(), csv_dir.as_ref()),
        Verb::Verify { seed } => cmd_verify(seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
