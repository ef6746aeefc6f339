//! One PASS/FAIL line per acceptance criterion, with the bounds each ran
//! under. Runs without the test harness so the lines always print.
//!
//! Criteria known to be red are listed in `EXPECTED_RED`; the process fails
//! only when an outcome differs from what is listed.

use std::collections::BTreeMap;
use std::process::ExitCode;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use schemata::axiomdb::{formula, scheme};
use schemata::bundled;
use schemata::models::{check_certificate, gen_eval, search_truth_table, tt_eval, ModelSpec};
use schemata::models::table::tt_validates;
use schemata::objectlevel::{decide_eq_truth_capped, object_instantiate, parse_object_formula};
use schemata::proof::{legitimate_on_proof, subst_proof, transform_proof, verify_proof};
use schemata::schemes::{DvSet, Scheme, Substitution};
use schemata::script::{parse_script, ProofEntry, Script};
use schemata::suite::{run_check, Bounds};
use schemata::syntax::{Language, Metaformula, Metavariable, Mf};
use schemata::transforms::closure::{allcomm_semisupertruth, supertrue1_closure, weak_allcomm_closure, SUPERTRUE1};
use schemata::transforms::TransformSpec;

/// Criteria whose literal statement does not hold; see the decisions ledger.
const EXPECTED_RED: [u8; 1] = [5];

/// Property-suite sample size per property.
const PROPERTY_CASES: u32 = 200;
/// Domain sizes the equality-decision oracle cross-checks.
const ORACLE_SIZES: std::ops::RangeInclusive<usize> = 1..=4;
/// Evaluation budget for the five-valued table search.
const SEARCH_BUDGET: u64 = 100_000_000;
/// Image heights for closure checks; ALLdistr stays at the first.
const CLOSURE_HEIGHTS: [usize; 2] = [2, 3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn script(name: &str) -> Script {
    parse_script(bundled::get(name).unwrap()).unwrap()
}

fn suite_check(name: &str) -> (bool, String) {
    let r = run_check(name, &Bounds::default()).expect("suite check");
    (r.pass, r.to_string())
}

// 1. Kernel fixtures and tampering.

/// Proof-line statements of `block`, as byte ranges of `text`.
fn statement_spans(text: &str, block: &str) -> Vec<(usize, usize)> {
    let start = text.find(&format!("scheme {} ", block)).expect("block");
    let end = text[start..].find("\n}").map_or(text.len(), |e| start + e);
    let mut spans = Vec::new();
    let mut offset = start;
    for line in text[start..end].split_inclusive('\n') {
        let t = line.trim_start();
        if let (Some(colon), Some(by)) = (t.find(": "), t.find(" by ")) {
            if t[..colon].chars().all(|c| c.is_ascii_digit()) && colon < by {
                let lead = line.len() - t.len();
                spans.push((offset + lead + colon + 2, offset + lead + by));
            }
        }
        offset += line.len();
    }
    spans
}

fn tamper_rejected(file: &str, block: &str) -> (usize, Vec<String>) {
    let text = bundled::get(file).unwrap();
    let mut tried = 0;
    let mut accepted = Vec::new();
    for (a, b) in statement_spans(text, block) {
        for pos in a..b {
            let c = text.as_bytes()[pos] as char;
            if c.is_whitespace() {
                continue;
            }
            for r in ['0', '1', '2', '3', 'x', 'f', '=', '-', 'A', '(', ')'] {
                if r == c {
                    continue;
                }
                tried += 1;
                let mut t = text.to_string();
                t.replace_range(pos..pos + 1, &r.to_string());
                let ok = match parse_script(&t) {
                    Err(_) => false,
                    Ok(s) => {
                        let e = s.proofs.iter().find(|e| e.proof.name == block).expect("block");
                        verify_proof(&e.proof, &e.axioms).is_ok()
                    }
                };
                if ok {
                    accepted.push(format!("{}:{} `{}`->`{}`", file, pos, c, r));
                }
            }
        }
    }
    (tried, accepted)
}

fn criterion_1() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for f in ["eqrefl_gen", "identity", "eqrefl_all", "modald"] {
        let (ok, d) = suite_check(&format!("proofs:{}", f));
        pass &= ok;
        details.push(d);
    }
    let targets = [
        ("eqrefl_gen.fol", "eqrefl-all-gen"),
        ("eqrefl_all.fol", "eqrefl-all-genEq"),
        ("modald.fol", "modalD-denot"),
        ("identity.fol", "identity"),
    ];
    let mut tried = 0;
    for (file, block) in targets {
        let (n, accepted) = tamper_rejected(file, block);
        tried += n;
        if !accepted.is_empty() {
            pass = false;
            details.push(format!("accepted tamperings: {}", accepted.join(", ")));
        }
    }
    details.push(format!("{} single-character tamperings of the final blocks' proof lines, all rejected", tried));
    outcome(pass, details.join(" | "))
}

// 2. Proof-instance and transform property suites.

fn pool() -> Vec<ProofEntry> {
    let mut out = Vec::new();
    for name in ["eqrefl_gen.fol", "identity.fol", "eqrefl_all.fol", "modald.fol"] {
        out.extend(script(name).proofs);
    }
    out
}

fn small_formula() -> impl Strategy<Value = Metaformula> {
    let leaf = prop_oneof![(0u32..3).prop_map(Metaformula::fm), (0u32..4, 0u32..4).prop_map(|(a, b)| Metaformula::eq(a, b))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Metaformula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Metaformula::imp(a, b)),
            (0u32..4, inner).prop_map(|(x, a)| Metaformula::all(x, a)),
        ]
    })
}

fn criterion_2() -> Outcome {
    let pool = pool();
    let cfg = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let legit = std::cell::Cell::new(0u32);
    let mut runner = TestRunner::new_with_rng(cfg.clone(), proptest::test_runner::TestRng::deterministic_rng(cfg.rng_algorithm));
    let strat = (0usize..1000, prop::collection::vec(0u32..4, 4), prop::collection::vec(small_formula(), 3));
    let r1 = runner.run(&strat, |(k, vars, fms)| {
        let e = &pool[k % pool.len()];
        let mut sigma = Substitution::identity();
        for m in e.proof.target.occurring() {
            let i = m.index as usize;
            sigma = if m.is_var() { sigma.var(m.index, vars[i % 4]) } else { sigma.formula(m.index, fms[i % 3].clone()) };
        }
        if !legitimate_on_proof(&sigma, &e.proof) {
            return Ok(());
        }
        legit.set(legit.get() + 1);
        let q = subst_proof(&sigma, &e.proof).map_err(|x| TestCaseError::fail(x.to_string()))?;
        verify_proof(&q, &e.axioms).map_err(|x| TestCaseError::fail(format!("{}: {}", e.proof.name, x)))?;
        Ok(())
    });
    let legit_t = std::cell::Cell::new(0u32);
    let mut runner = TestRunner::new_with_rng(cfg.clone(), proptest::test_runner::TestRng::deterministic_rng(cfg.rng_algorithm));
    let r2 = runner.run(&(0usize..1000, 0u32..4, 0u32..4, any::<bool>()), |(k, i, j, sym)| {
        let e = &pool[k % pool.len()];
        let spec = if sym { TransformSpec::sym(i, j) } else { TransformSpec::directed(i, j) };
        if let Ok(q) = transform_proof(spec, &e.proof) {
            legit_t.set(legit_t.get() + 1);
            verify_proof(&q, &e.axioms.transformed(spec)).map_err(|x| TestCaseError::fail(format!("{} {}: {}", e.proof.name, spec, x)))?;
        }
        Ok(())
    });
    let pass = r1.is_ok() && r2.is_ok();
    let mut detail = format!(
        "{} (proof, sigma) pairs, {} legitimate, all re-verified; {} (proof, i, j) pairs, {} legitimate, all re-verified against transformed axioms",
        PROPERTY_CASES, legit.get(), PROPERTY_CASES, legit_t.get()
    );
    if let Err(e) = r1 {
        detail = format!("substitution: {}", e);
    }
    if let Err(e) = r2 {
        detail = format!("transform: {}", e);
    }
    outcome(pass, detail)
}

// 3. Independence certificates.

fn criterion_3() -> Outcome {
    let s = script("certs.fol");
    let mut pass = true;
    let mut notes = Vec::new();
    let mut deviations = Vec::new();
    let mut searched = Vec::new();
    for c in &s.certs {
        match check_certificate(c) {
            Ok(r) => {
                if !r.also_falsified.is_empty() {
                    let also: Vec<&str> = r.also_falsified.iter().map(|(l, _)| l.as_str()).collect();
                    deviations.push(format!("{} also refutes {}", c.name, also.join("+")));
                }
                if c.witness.is_none() {
                    searched.push(c.name.clone());
                }
                if c.name.contains("nbhd") && !r.refutation.contains("w2") || c.name == "indep-modal5" && !r.refutation.contains("world A") {
                    pass = false;
                    notes.push(format!("{} refutes elsewhere: {}", c.name, r.refutation));
                }
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{}: {}", c.name, e));
            }
        }
    }
    // The five-valued table: the minimp instance takes the non-designated value 1.
    let c = s.cert("indep-minimp").unwrap();
    if let (ModelSpec::Table(t), Some(w)) = (&c.model, &c.witness) {
        let inst = object_instantiate(&w.tau, &scheme("minimp").unwrap()).unwrap();
        let v = tt_eval(t, &inst.concl).unwrap();
        pass &= v == 1 && !t.is_designated(1);
        notes.push(format!("minimp falsifier value {}", v));
    }
    // The contrap witness.
    let w = s.cert("indep-contrap").unwrap().witness.as_ref().unwrap();
    let lang = Language::empty();
    pass &= w.tau.fm.get(&0) == Some(&parse_object_formula("v0 = v1", &lang).unwrap())
        && w.tau.fm.get(&1) == Some(&parse_object_formula("v0 = v0", &lang).unwrap());
    // The gen valuation values.
    let p = Language::new(&[("P", 1)]).unwrap();
    let (a, b) = (gen_eval(&parse_object_formula("P v0", &p).unwrap()), gen_eval(&parse_object_formula("A. v0 P v0", &p).unwrap()));
    pass &= a == 1 && b == 0;
    notes.push(format!("val(P v0)={} > val(A. v0 P v0)={}", a, b));
    let gen_height = match &s.cert("indep-gen").unwrap().model {
        ModelSpec::Gen(g) => g.height,
        _ => 0,
    };
    pass &= gen_height == 3;
    notes.push(format!("gen validation at height {}", gen_height));
    notes.push(format!("found by search: {}", searched.join(", ")));
    notes.push(format!("deviations from the stated validated sets: {}", deviations.join("; ")));
    outcome(pass, format!("{} certificates OK; {}", s.certs.len(), notes.join("; ")))
}

// 4. Supertruth.

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let (ok, d) = suite_check("ALLcomm-not-supertrue");
    pass &= ok;
    notes.push(d);
    for h in CLOSURE_HEIGHTS {
        match weak_allcomm_closure(h) {
            Ok(st) => notes.push(st.to_string()),
            Err(e) => {
                pass = false;
                notes.push(e.to_string());
            }
        }
        for l in SUPERTRUE1 {
            if l == "ALLdistr" && h > CLOSURE_HEIGHTS[0] {
                continue;
            }
            match supertrue1_closure(l, h) {
                Ok(st) => notes.push(format!("{} h{}: {} transforms", l, h, st.transforms)),
                Err(e) => {
                    pass = false;
                    notes.push(format!("{} h{}: {}", l, h, e));
                }
            }
        }
    }
    let (ok, d) = suite_check("quantifier-free");
    pass &= ok;
    notes.push(d);
    outcome(pass, notes.join("; "))
}

// 5. Semisupertruth.

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in ["spec-not-semisupertrue", "ALLeq-not-semisupertrue"] {
        let (ok, d) = suite_check(n);
        pass &= ok;
        notes.push(d);
    }
    for h in CLOSURE_HEIGHTS {
        match allcomm_semisupertruth(h, false) {
            Ok(st) => notes.push(format!("unrestricted h{}: {}", h, st)),
            Err(e) => {
                pass = false;
                notes.push(format!("unrestricted h{}: {}", h, e));
            }
        }
        match allcomm_semisupertruth(h, true) {
            Ok(st) => notes.push(format!("with DV(x,phi), DV(y,phi) h{}: all {} transforms true", h, st.by_decision)),
            Err(e) => notes.push(format!("with DV h{}: {}", h, e)),
        }
    }
    outcome(pass, notes.join("; "))
}

// 6. The DV fixture.

fn criterion_6() -> Outcome {
    let (ok, d) = suite_check("prop-dv");
    outcome(ok, d)
}

// 7. Equality decisions against hand-listed verdicts and a naive oracle.

fn dv(pairs: &[(u32, u32)]) -> DvSet {
    DvSet::from_pairs(pairs.iter().map(|&(a, b)| (Metavariable::var(a), Metavariable::var(b))))
}

fn eval(m: &Metaformula, obj: &BTreeMap<u32, u32>, env: &mut BTreeMap<u32, usize>, n: usize) -> bool {
    match m {
        Mf::Equals(a, b) => env[&obj[a]] == env[&obj[b]],
        Mf::Not(a) => !eval(a, obj, env, n),
        Mf::Implies(a, b) => !eval(a, obj, env, n) || eval(b, obj, env, n),
        Mf::Forall(x, a) => {
            let v = obj[x];
            let saved = env[&v];
            let mut all = true;
            for d in 0..n {
                env.insert(v, d);
                if !eval(a, obj, env, n) {
                    all = false;
                    break;
                }
            }
            env.insert(v, saved);
            all
        }
        other => panic!("not pure equality: {:?}", other),
    }
}

/// Validity at domain size `n`: every map of variable metavariables to
/// object variables respecting DV, every assignment.
fn oracle(s: &Scheme, n: usize) -> bool {
    let xs: Vec<u32> = s.occurring().into_iter().filter(|m| m.is_var()).map(|m| m.index).collect();
    let k = xs.len();
    let mut map = vec![0u32; k];
    loop {
        let obj: BTreeMap<u32, u32> = xs.iter().copied().zip(map.iter().copied()).collect();
        let respects = s.dv().iter().all(|(a, b)| obj[&a.index] != obj[&b.index]);
        if respects {
            let mut asg = vec![0usize; k];
            loop {
                let mut env: BTreeMap<u32, usize> = (0..k as u32).zip(asg.iter().copied()).collect();
                if !eval(s.concl(), &obj, &mut env, n) {
                    return false;
                }
                if !bump(&mut asg, n) {
                    break;
                }
            }
        }
        if !bump(&mut map, k as u32) {
            return true;
        }
    }
}

fn bump<T: Copy + PartialOrd + std::ops::AddAssign + From<u8>>(d: &mut [T], n: impl Into<T> + Copy) -> bool {
    for x in d.iter_mut() {
        *x += T::from(1);
        if *x < n.into() {
            return true;
        }
        *x = T::from(0);
    }
    false
}

fn criterion_7() -> Outcome {
    let cases: Vec<(&str, Scheme, bool)> = vec![
        ("A. x x = x", Scheme::axiom(formula("A. x0 x0 = x0")), true),
        ("-. A. x x = y, DV", Scheme::new(vec![], formula("-. A. x0 x0 = x1"), dv(&[(0, 1)])), false),
        ("ALLcomm instance", Scheme::axiom(formula("( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )")), true),
        ("its (x,y)-transform", Scheme::axiom(formula("( A. x0 A. x0 x2 = x3 -> A. x1 A. x0 x2 = x3 )")), false),
        ("-. A. x -. x = y, DV", Scheme::new(vec![], formula("-. A. x0 -. x0 = x1"), dv(&[(0, 1)])), true),
        ("EQrefl", scheme("EQrefl").unwrap(), true),
        ("EQsymm", scheme("EQsymm").unwrap(), true),
        ("EQtrans", scheme("EQtrans").unwrap(), true),
        ("x = y", Scheme::axiom(formula("x0 = x1")), false),
        ("spec at x = y", Scheme::axiom(formula("( A. x0 x0 = x1 -> x0 = x1 )")), true),
        ("its {x,y}-transform", Scheme::axiom(formula("( A. x0 x0 = x0 -> x0 = x1 )")), false),
        ("genEq", scheme("genEq").unwrap(), true),
        ("denot", scheme("denot").unwrap(), true),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    let cap = *ORACLE_SIZES.end();
    for (name, s, want) in &cases {
        let d = match decide_eq_truth_capped(s, Some(cap)) {
            Ok(d) => d,
            Err(e) => {
                pass = false;
                notes.push(format!("{}: {}", name, e));
                continue;
            }
        };
        if d.truth != *want || !d.exact {
            pass = false;
            notes.push(format!("{}: decided {} (exact {}), expected {}", name, d.truth, d.exact, want));
        }
        for n in ORACLE_SIZES {
            let o = oracle(s, n);
            if let Some((_, got)) = d.per_size.iter().find(|(m, _)| *m == n) {
                if *got != o {
                    pass = false;
                    notes.push(format!("{} size {}: decision {} oracle {}", name, n, got, o));
                }
            }
            if !o && *want {
                pass = false;
                notes.push(format!("{} fails at size {} in the oracle", name, n));
            }
        }
    }
    let neg = decide_eq_truth_capped(&cases[1].1, Some(cap)).unwrap();
    let sizes: Vec<String> = neg.per_size.iter().map(|(n, t)| format!("{}:{}", n, t)).collect();
    pass &= neg.true_from(2) && !neg.per_size[0].1;
    notes.push(format!("-. A. x x = y per size {}", sizes.join(" ")));
    outcome(pass, format!("{} schemes match their verdicts and the oracle at sizes 1-{}; {}", cases.len(), cap, notes.join("; ")))
}

// 8. Truth-table search.

fn criterion_8() -> Outcome {
    let set = |ls: &[&str]| ls.iter().map(|l| scheme(l).unwrap()).collect::<Vec<_>>();
    let minimp = scheme("minimp").unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    let cons = set(&["mp", "notnotintro", "K", "I"]);
    match search_truth_table(5, &cons, &minimp, SEARCH_BUDGET) {
        Ok(r) => match r.table {
            Some(t) => {
                let ok = cons.iter().all(|c| tt_validates(&t, c).is_validated()) && tt_validates(&t, &minimp).is_falsified();
                pass &= ok;
                notes.push(format!("n=5 witness after {} evaluations (budget {}), rechecked: {}", r.evaluations, SEARCH_BUDGET, ok));
            }
            None => {
                pass = false;
                notes.push("n=5: no table".into());
            }
        },
        Err(e) => {
            pass = false;
            notes.push(format!("n=5: {}", e));
        }
    }
    let s = script("certs.fol");
    if let ModelSpec::Table(t) = &s.cert("indep-minimp").unwrap().model {
        let ok = cons.iter().all(|c| tt_validates(t, c).is_validated()) && tt_validates(t, &minimp).is_falsified();
        pass &= ok;
        notes.push(format!("bundled five-valued table as a witness: {}", ok));
    }
    match search_truth_table(2, &set(&["mp", "K", "I"]), &minimp, SEARCH_BUDGET) {
        Ok(r) if r.table.is_none() => notes.push(format!("n=2 none (exhaustive, {} evaluations)", r.evaluations)),
        other => {
            pass = false;
            notes.push(format!("n=2: {:?}", other.map(|r| r.table.is_some())));
        }
    }
    outcome(pass, notes.join("; "))
}

fn from_suite(name: &str) -> Outcome {
    let (ok, d) = suite_check(name);
    outcome(ok, d)
}

fn main() -> ExitCode {
    let criteria: Vec<(u8, &str, fn() -> Outcome)> = vec![
        (1, "kernel fixtures", criterion_1),
        (2, "proof-instance and transform properties", criterion_2),
        (3, "independence certificates", criterion_3),
        (4, "supertruth", criterion_4),
        (5, "semisupertruth", criterion_5),
        (6, "DV fixture", criterion_6),
        (7, "equality decision regression", criterion_7),
        (8, "truth-table search", criterion_8),
        (9, "microkernel", || from_suite("mm:appendix-a")),
        (10, "*-truth", || from_suite("star:appendix-c")),
        (11, "soundness shadow", || from_suite("soundness-shadow")),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let o = f();
        println!("{} {:>2} {}: {}", if o.pass { "PASS" } else { "FAIL" }, n, name, o.detail);
        if o.pass == EXPECTED_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcomes as expected (red: {:?})", EXPECTED_RED);
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {:?}", unexpected);
        ExitCode::FAILURE
    }
}
