use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use schemata::axiomdb;
use schemata::microkernel::{mm_parse, mm_verify, MmStatus};
use schemata::models::{check_certificate, search_truth_table};
use schemata::objectlevel::decide_eq_truth_capped;
use schemata::proof::KernelErrorKind;
use schemata::schemes::{instantiate, DvSet, Scheme};
use schemata::script::{parse_script, parse_substitution, verify_script};
use schemata::suite::{self, Bounds};
use schemata::syntax::{parse_metaformula, Language, Metavariable};
use schemata::transforms::{transform_scheme, verify_not_supertrue, TransformSpec};

#[derive(Parser)]
#[command(name = "schemata", version, about = "Scheme-level first-order logic toolkit")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SchemeArg {
    /// Catalog label or metaformula text, e.g. "( A. x0 x0 = x1 -> x0 = x1 )".
    #[arg(allow_hyphen_values = true)]
    scheme: String,
    /// A DV group such as "x0 x1 f0"; repeatable.
    #[arg(long = "dv")]
    dv: Vec<String>,
    /// Predicate declarations such as "P 1, Q 2".
    #[arg(long = "lang", default_value = "")]
    lang: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify every proof block of a script.
    Verify { file: String },
    /// Verify a Metamath-subset database.
    MmVerify { file: String },
    /// Decide truth of a pure-equality scheme.
    Decide(SchemeArg),
    /// Apply an (i,j)- or {i,j}-transform.
    Transform {
        /// Index of the variable metavariable xi.
        i: u32,
        /// Index of the variable metavariable xj.
        j: u32,
        /// The symmetric {i,j}-transform instead of (i,j).
        #[arg(long)]
        sym: bool,
        #[command(flatten)]
        target: SchemeArg,
    },
    /// Apply a substitution such as "f0 := x0 = x1 ; x1 := x2".
    Instantiate {
        #[command(flatten)]
        target: SchemeArg,
        #[arg(long = "sub")]
        sub: String,
    },
    /// List catalog schemes, or the labels of a system.
    Axioms {
        /// Only this label.
        label: Option<String>,
        #[arg(long)]
        system: Option<String>,
        /// The label correspondence table.
        #[arg(long)]
        map: bool,
    },
    /// Check the cert and supercert blocks of a script.
    CheckCert {
        file: String,
        #[arg(long)]
        only: Option<String>,
    },
    /// Search truth tables validating some schemes and refuting another.
    SearchTable {
        /// Number of truth values; designated sets 0..k are tried for each k.
        #[arg(long)]
        values: u8,
        /// Comma-separated labels.
        #[arg(long, value_delimiter = ',')]
        validate: Vec<String>,
        /// Label the table must refute.
        #[arg(long)]
        falsify: String,
        /// Maximum number of scheme evaluations.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Run the bundled reproduction suite.
    Suite {
        /// Run only this check; repeatable.
        #[arg(long)]
        only: Vec<String>,
        /// Bound overrides such as "height=2,closure=3".
        #[arg(long, default_value = "")]
        bounds: String,
        /// List check names.
        #[arg(long)]
        list: bool,
    },
}

/// Outcome of a command: exit code, text and JSON renderings.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

fn ok(text: impl Into<String>, json: Value) -> Outcome {
    Outcome { code: 0, text: text.into(), json }
}

fn fail(code: u8, text: impl Into<String>, json: Value) -> Outcome {
    Outcome { code, text: text.into(), json }
}

fn usage(msg: impl Display) -> Outcome {
    fail(2, format!("error: {}", msg), json!({ "status": "error", "detail": msg.to_string() }))
}

fn read(path: &str) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path, e)))
}

/// Variant name of an error's debug form.
fn kind_name(d: &impl std::fmt::Debug) -> String {
    let s = format!("{:?}", d);
    s.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn language(spec: &str) -> Result<Language, Outcome> {
    let mut lang = Language::empty();
    for decl in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, arity) = decl.split_once(' ').ok_or_else(|| usage(format!("bad predicate declaration `{}`", decl)))?;
        let arity: usize = arity.trim().parse().map_err(|_| usage(format!("bad arity in `{}`", decl)))?;
        lang.add(name, arity).map_err(usage)?;
    }
    Ok(lang)
}

fn scheme_of(a: &SchemeArg) -> Result<(Scheme, Language), Outcome> {
    let lang = language(&a.lang)?;
    let base = match axiomdb::scheme(&a.scheme) {
        Ok(s) => s,
        Err(_) => {
            let f = parse_metaformula(&a.scheme, &lang).map_err(|e| usage(format!("`{}`: {}", a.scheme, e)))?;
            Scheme::axiom(f)
        }
    };
    let mut dv = base.dv().clone();
    for g in &a.dv {
        let group: Vec<Metavariable> = g
            .split_whitespace()
            .map(|t| Metavariable::parse(t).ok_or_else(|| usage(format!("`{}` is not a metavariable", t))))
            .collect::<Result<_, _>>()?;
        dv.insert_group(&group);
    }
    Ok((base.clone().with_dv(dv), lang))
}

fn max_domain() -> Result<usize, Outcome> {
    Bounds::from_env().map(|b| b.domain).map_err(usage)
}

fn cmd_verify(file: &str) -> Result<Outcome, Outcome> {
    let s = parse_script(&read(file)?).map_err(|e| {
        let kind = kind_name(&e.kind);
        fail(
            2,
            format!("{}:{}: {}", file, e.line, e.kind),
            json!({ "status": "error", "kind": kind, "detail": e.kind.to_string(), "location": { "file": file, "line": e.line } }),
        )
    })?;
    match verify_script(&s) {
        Ok(n) => {
            let names: Vec<&str> = s.proofs.iter().map(|p| p.proof.name.as_str()).collect();
            Ok(ok(format!("{}: {} proof blocks verified", file, n), json!({ "status": "ok", "verified": names })))
        }
        Err((block, se, k)) => {
            let code = if matches!(k.kind, KernelErrorKind::UnknownAxiom(_)) { 2 } else { 1 };
            let kind = kind_name(&k.kind);
            Err(fail(
                code,
                format!("{}:{}: block {} proof line {}: {} ({})", file, se.line, block, k.line, k.kind, kind),
                json!({
                    "status": "fail",
                    "kind": kind,
                    "detail": k.kind.to_string(),
                    "location": { "file": file, "line": se.line, "block": block, "proof_line": k.line },
                }),
            ))
        }
    }
}

fn cmd_mm_verify(file: &str) -> Result<Outcome, Outcome> {
    let db = mm_parse(&read(file)?).map_err(|e| {
        fail(2, format!("{}: {}", file, e), json!({ "status": "error", "kind": kind_name(&e), "detail": e.to_string() }))
    })?;
    let r = mm_verify(&db);
    let rows: Vec<Value> = r.results.iter().map(|(l, s)| json!({ "label": l, "result": s.to_string() })).collect();
    let text = r.to_string().trim_end().to_string();
    if r.all_ok() {
        let incomplete = r.with_status(|s| *s == MmStatus::Incomplete);
        Ok(ok(text, json!({ "status": "ok", "results": rows, "incomplete": incomplete })))
    } else {
        Err(fail(1, text, json!({ "status": "fail", "results": rows })))
    }
}

fn cmd_decide(a: &SchemeArg) -> Result<Outcome, Outcome> {
    let (s, _) = scheme_of(a)?;
    let cap = max_domain()?;
    let d = decide_eq_truth_capped(&s, Some(cap)).map_err(usage)?;
    let sizes: Vec<String> = d.per_size.iter().map(|(n, t)| format!("{}:{}", n, t)).collect();
    let mut text = format!("{}\nsizes {} (bound {}, checked to {}{})", d.truth, sizes.join(" "), d.bound, d.checked_up_to, if d.exact { "" } else { ", capped" });
    let witness = d.counterexample.as_ref().map(|c| {
        let asg: Vec<String> = c.assignment.iter().map(|(v, x)| format!("v{}={}", v, x)).collect();
        text.push_str(&format!("\ncounterexample: `{}` at size {} with {}", c.instance, c.size, asg.join(" ")));
        json!({ "instance": c.instance.to_string(), "size": c.size, "assignment": asg })
    });
    Ok(ok(
        text,
        json!({
            "status": "ok",
            "truth": d.truth,
            "exact": d.exact,
            "per_size": d.per_size,
            "witness": witness,
            "bounds": { "max_domain": cap, "required": d.bound },
        }),
    ))
}

fn cmd_transform(i: u32, j: u32, sym: bool, a: &SchemeArg) -> Result<Outcome, Outcome> {
    let (s, _) = scheme_of(a)?;
    let spec = if sym { TransformSpec::sym(i, j) } else { TransformSpec::directed(i, j) };
    match transform_scheme(spec, &s) {
        Ok(t) => Ok(ok(t.to_string(), json!({ "status": "ok", "transform": spec.to_string(), "result": t.to_string() }))),
        Err(e) => Err(fail(1, format!("{}", e), json!({ "status": "fail", "kind": kind_name(&e), "detail": e.to_string() }))),
    }
}

fn cmd_instantiate(a: &SchemeArg, sub: &str) -> Result<Outcome, Outcome> {
    let (s, lang) = scheme_of(a)?;
    let sigma = parse_substitution(sub, &lang).map_err(usage)?;
    match instantiate(&sigma, &s, &DvSet::new()) {
        Ok(t) => Ok(ok(t.to_string(), json!({ "status": "ok", "result": t.to_string() }))),
        Err(e) => Err(fail(1, format!("{}", e), json!({ "status": "fail", "kind": kind_name(&e), "detail": e.to_string() }))),
    }
}

fn cmd_axioms(label: Option<&str>, system: Option<&str>, map: bool) -> Result<Outcome, Outcome> {
    if map {
        let rows = axiomdb::label_map();
        let text: Vec<String> = rows.iter().map(|r| format!("{:12} {}", r.article.unwrap_or("-"), r.set_mm)).collect();
        let js: Vec<Value> = rows.iter().map(|r| json!({ "label": r.article, "set_mm": r.set_mm })).collect();
        return Ok(ok(text.join("\n"), json!({ "status": "ok", "map": js })));
    }
    let keep: Option<std::collections::BTreeSet<String>> = match system {
        Some(sys) => Some(axiomdb::get_system(sys).map_err(usage)?),
        None => None,
    };
    if let Some(l) = label {
        axiomdb::get_axiom(l).map_err(usage)?;
    }
    let mut text = Vec::new();
    let mut js = Vec::new();
    for e in axiomdb::all_axioms() {
        if label.is_some_and(|l| l != e.label && !e.aliases.iter().any(|a| a == l)) {
            continue;
        }
        if keep.as_ref().is_some_and(|k| !k.contains(&e.label)) {
            continue;
        }
        text.push(format!("{:12} {:10} {}", e.label, e.set_mm_label.as_deref().unwrap_or("-"), e.scheme));
        js.push(json!({
            "label": e.label,
            "aliases": e.aliases,
            "set_mm": e.set_mm_label,
            "bloc": format!("{:?}", e.bloc),
            "scheme": e.scheme.to_string(),
        }));
    }
    Ok(ok(text.join("\n"), json!({ "status": "ok", "axioms": js })))
}

fn cmd_check_cert(file: &str, only: Option<&str>) -> Result<Outcome, Outcome> {
    let s = parse_script(&read(file)?).map_err(|e| {
        fail(2, format!("{}:{}: {}", file, e.line, e.kind), json!({ "status": "error", "detail": e.kind.to_string(), "location": { "file": file, "line": e.line } }))
    })?;
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut failed = false;
    for c in s.certs.iter().filter(|c| only.is_none_or(|o| o == c.name)) {
        match check_certificate(c) {
            Ok(r) => {
                text.push(r.to_string());
                rows.push(json!({ "name": c.name, "status": "ok", "witness": r.refutation, "validated": r.validated.len() }));
            }
            Err(e) => {
                failed = true;
                text.push(format!("certificate {}: FAILED: {}", c.name, e));
                rows.push(json!({ "name": c.name, "status": "fail", "kind": kind_name(&e), "detail": e.to_string() }));
            }
        }
    }
    for (c, mode) in s.supercerts.iter().filter(|(c, _)| only.is_none_or(|o| o == c.name)) {
        match verify_not_supertrue(c, *mode) {
            Ok(r) => {
                text.push(format!("{}: OK\n  {}", c.name, r));
                rows.push(json!({ "name": c.name, "status": "ok", "witness": r.detail, "transformed": r.transformed.to_string() }));
            }
            Err(e) => {
                failed = true;
                text.push(format!("{}: FAILED: {}", c.name, e));
                rows.push(json!({ "name": c.name, "status": "fail", "kind": kind_name(&e), "detail": e.to_string() }));
            }
        }
    }
    if rows.is_empty() {
        return Err(usage(match only {
            Some(o) => format!("no certificate `{}` in {}", o, file),
            None => format!("no certificates in {}", file),
        }));
    }
    let js = json!({ "status": if failed { "fail" } else { "ok" }, "results": rows });
    if failed {
        Err(fail(1, text.join("\n"), js))
    } else {
        Ok(ok(text.join("\n"), js))
    }
}

fn cmd_search(values: u8, validate: &[String], falsify: &str, budget: u64) -> Result<Outcome, Outcome> {
    let v: Vec<Scheme> = validate.iter().map(|l| axiomdb::scheme(l.trim())).collect::<Result<_, _>>().map_err(usage)?;
    let f = axiomdb::scheme(falsify).map_err(usage)?;
    let bounds = json!({ "values": values, "budget": budget });
    match search_truth_table(values, &v, &f, budget) {
        Ok(r) => match r.table {
            Some(t) => Ok(ok(
                format!("found after {} evaluations\n{}", r.evaluations, t.to_string().trim_end()),
                json!({ "status": "ok", "witness": t.to_string(), "evaluations": r.evaluations, "bounds": bounds }),
            )),
            None => Ok(ok(
                format!("none (exhaustive, {} evaluations)", r.evaluations),
                json!({ "status": "ok", "witness": null, "exhaustive": true, "evaluations": r.evaluations, "bounds": bounds }),
            )),
        },
        Err(e @ schemata::models::search::SearchError::BudgetExhausted { .. }) => {
            Err(fail(1, e.to_string(), json!({ "status": "fail", "kind": kind_name(&e), "detail": e.to_string(), "bounds": bounds })))
        }
        Err(e) => Err(usage(e)),
    }
}

fn cmd_suite(only: &[String], bounds: &str, list: bool) -> Result<Outcome, Outcome> {
    if list {
        let names = suite::check_names();
        return Ok(ok(names.join("\n"), json!({ "status": "ok", "checks": names })));
    }
    let mut b = Bounds::from_env().map_err(usage)?;
    b.apply(bounds).map_err(usage)?;
    let results = suite::run_suite(&b, only).map_err(usage)?;
    let passed = results.iter().filter(|r| r.pass).count();
    let mut text: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    text.push(format!("{}/{} passed ({})", passed, results.len(), b));
    let rows: Vec<Value> = results
        .iter()
        .map(|r| json!({ "name": r.name, "status": if r.pass { "pass" } else { "fail" }, "bounds": r.bounds, "detail": r.detail }))
        .collect();
    let all = passed == results.len();
    let js = json!({ "status": if all { "ok" } else { "fail" }, "results": rows, "bounds": b.to_string() });
    if all {
        Ok(ok(text.join("\n"), js))
    } else {
        Err(fail(1, text.join("\n"), js))
    }
}

fn run(cli: &Cli) -> Outcome {
    let r = match &cli.cmd {
        Cmd::Verify { file } => cmd_verify(file),
        Cmd::MmVerify { file } => cmd_mm_verify(file),
        Cmd::Decide(a) => cmd_decide(a),
        Cmd::Transform { i, j, sym, target } => cmd_transform(*i, *j, *sym, target),
        Cmd::Instantiate { target, sub } => cmd_instantiate(target, sub),
        Cmd::Axioms { label, system, map } => cmd_axioms(label.as_deref(), system.as_deref(), *map),
        Cmd::CheckCert { file, only } => cmd_check_cert(file, only.as_deref()),
        Cmd::SearchTable { values, validate, falsify, budget } => cmd_search(*values, validate, falsify, *budget),
        Cmd::Suite { only, bounds, list } => cmd_suite(only, bounds, *list),
    };
    r.unwrap_or_else(|o| o)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    // A closed pipe is not an error worth reporting.
    let _ = if cli.json {
        writeln!(std::io::stdout(), "{}", out.json)
    } else if out.code == 0 {
        writeln!(std::io::stdout(), "{}", out.text)
    } else {
        writeln!(std::io::stderr(), "{}", out.text)
    };
    ExitCode::from(out.code)
}
