//! The bundled reproduction suite: every shipped certificate and property
//! fixture as a named check with the bounds it ran under.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::axiomdb::{self, get_system};
use crate::bundled;
use crate::microkernel::{derivable, mm_parse, mm_verify, MmStatus, APPENDIX_A};
use crate::models::star::{star_rule_check, star_true, RuleCheck, StarTruthModel};
use crate::models::{check_certificate, ModelSpec};
use crate::objectlevel::{decide_eq_truth_capped, parse_object_formula};
use crate::proof::proof_dv;
use crate::schemes::{instantiate, DvSet, Scheme, Substitution};
use crate::script::{parse_script, verify_script, Script};
use crate::syntax::{Language, Metaformula, Metavariable};
use crate::transforms::closure::{allcomm_semisupertruth, supertrue1_closure, weak_allcomm_closure, SUPERTRUE1};
use crate::transforms::{supertrue_quantifier_free, verify_not_supertrue};

/// Environment variable capping brute-force domain sizes.
pub const MAX_DOMAIN_ENV: &str = "SCHEMATA_MAX_DOMAIN";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Formula height for gen-valuation checks and *-truth rule checks.
    pub height: usize,
    /// Image height for transform-closure checks.
    pub closure: usize,
    /// Domain cap for equality decisions.
    pub domain: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { height: 3, closure: 2, domain: 4 }
    }
}

impl Bounds {
    /// Defaults, with the domain cap taken from the environment if set.
    pub fn from_env() -> Result<Self, String> {
        let mut b = Bounds::default();
        if let Ok(v) = std::env::var(MAX_DOMAIN_ENV) {
            b.domain = v.trim().parse().map_err(|_| format!("{} must be a number, got `{}`", MAX_DOMAIN_ENV, v))?;
        }
        Ok(b)
    }

    /// Applies `key=value` pairs separated by commas.
    pub fn apply(&mut self, spec: &str) -> Result<(), String> {
        for kv in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected key=value, got `{}`", kv))?;
            let n: usize = v.trim().parse().map_err(|_| format!("bad number in `{}`", kv))?;
            if n == 0 {
                return Err(format!("`{}` must be positive", k));
            }
            match k.trim() {
                "height" => self.height = n,
                "closure" => self.closure = n,
                "domain" => self.domain = n,
                other => return Err(format!("unknown bound `{}` (height, closure, domain)", other)),
            }
        }
        Ok(())
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "height={},closure={},domain={}", self.height, self.closure, self.domain)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub bounds: String,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{} {}", status, self.name)?;
        if !self.bounds.is_empty() {
            write!(f, " [{}]", self.bounds)?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Proof fixtures and the labels each may rest on.
pub fn proof_fixtures() -> Vec<(&'static str, &'static str, BTreeSet<String>)> {
    let sys = |n: &str| get_system(n).expect("catalog system");
    let with = |mut s: BTreeSet<String>, extra: &[&str]| {
        s.extend(extra.iter().map(|l| l.to_string()));
        s
    };
    vec![
        ("eqrefl_gen.fol", "eqrefl-all-gen", with(BTreeSet::new(), &["mp", "gen", "EQrefl"])),
        ("identity.fol", "identity", with(BTreeSet::new(), &["mp", "minimp"])),
        ("eqrefl_all.fol", "eqrefl-all-genEq", with(sys("propcalc"), &["EQrefl", "genEq"])),
        ("modald.fol", "modalD-denot", with(sys("modK"), &["EQrefl", "denot"])),
    ]
}

fn script(name: &str) -> Script {
    parse_script(bundled::get(name).expect("bundled script")).expect("bundled scripts parse")
}

/// Every check name, in suite order.
pub fn check_names() -> Vec<String> {
    let mut out: Vec<String> = proof_fixtures().iter().map(|(f, _, _)| format!("proofs:{}", f.trim_end_matches(".fol"))).collect();
    out.extend(script("certs.fol").certs.iter().map(|c| c.name.clone()));
    out.extend(script("supercerts.fol").supercerts.iter().map(|(c, _)| c.name.clone()));
    out.extend(SUPERTRUE1.iter().map(|l| format!("closure:{}", l)));
    for n in ["closure:ALLcomm+DV", "semi:ALLcomm+DV", "semi:ALLcomm-counterexample", "quantifier-free", "prop-dv", "mm:appendix-a", "star:appendix-c", "soundness-shadow"] {
        out.push(n.to_string());
    }
    out
}

fn result(name: &str, pass: bool, bounds: impl Into<String>, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.to_string(), pass, bounds: bounds.into(), detail: detail.into() }
}

/// Runs one named check; `None` for an unknown name.
pub fn run_check(name: &str, b: &Bounds) -> Option<CheckResult> {
    if let Some(file) = name.strip_prefix("proofs:") {
        let (file, target, base) = proof_fixtures().into_iter().find(|(f, _, _)| f.trim_end_matches(".fol") == file)?;
        let s = script(file);
        return Some(match verify_script(&s) {
            Err((block, e, _)) => result(name, false, "", format!("block {} line {}: {}", block, e.line, e.kind)),
            Ok(n) => {
                let f = s.foundations(target).unwrap_or_default();
                let extra: Vec<&String> = f.difference(&base).collect();
                let detail = format!("{} blocks verified; {} rests on {}", n, target, f.iter().cloned().collect::<Vec<_>>().join(", "));
                if extra.is_empty() {
                    result(name, true, "", detail)
                } else {
                    result(name, false, "", format!("{}; outside the base: {:?}", detail, extra))
                }
            }
        });
    }
    if let Some(label) = name.strip_prefix("closure:") {
        let r = if label == "ALLcomm+DV" { weak_allcomm_closure(b.closure) } else { supertrue1_closure(label, b.closure) };
        let bounds = format!("closure={}", b.closure);
        return Some(match r {
            Ok(st) => result(name, true, bounds, st.to_string()),
            Err(e) => result(name, false, bounds, e.to_string()),
        });
    }
    let bounds = format!("closure={}", b.closure);
    match name {
        "semi:ALLcomm+DV" => {
            return Some(match allcomm_semisupertruth(b.closure, true) {
                Ok(st) => result(name, true, bounds, st.to_string()),
                Err(e) => result(name, false, bounds, e.to_string()),
            })
        }
        "semi:ALLcomm-counterexample" => {
            return Some(match allcomm_semisupertruth(b.closure, false) {
                Err(e) => result(name, true, bounds, format!("without DV the renaming argument fails: {}", e)),
                Ok(st) => result(name, false, bounds, format!("no counterexample: {}", st)),
            })
        }
        "quantifier-free" => return Some(quantifier_free()),
        "prop-dv" => return Some(prop_dv(b)),
        "mm:appendix-a" => return Some(appendix_a()),
        "star:appendix-c" => return Some(appendix_c(b)),
        "soundness-shadow" => return Some(soundness_shadow(b)),
        _ => {}
    }
    let certs = script("certs.fol");
    if let Some(c) = certs.cert(name) {
        let mut c = c.clone();
        let mut bounds = String::new();
        if let ModelSpec::Gen(g) = &mut c.model {
            g.height = b.height;
            bounds = format!("height={}", b.height);
        }
        return Some(match check_certificate(&c) {
            Ok(r) => {
                let mut detail = format!("{} validated, refutes {} by {}", r.validated.len(), r.target, r.refutation);
                if !r.also_falsified.is_empty() {
                    let also: Vec<&str> = r.also_falsified.iter().map(|(l, _)| l.as_str()).collect();
                    detail.push_str(&format!("; also refutes {}", also.join(", ")));
                }
                result(name, true, bounds, detail)
            }
            Err(e) => result(name, false, bounds, e.to_string()),
        });
    }
    let supers = script("supercerts.fol");
    let (c, mode) = supers.supercert(name)?;
    Some(match verify_not_supertrue(c, *mode) {
        Ok(r) => result(name, true, "", format!("not {}: {}", mode, r.detail)),
        Err(e) => result(name, false, "", e.to_string()),
    })
}

fn quantifier_free() -> CheckResult {
    let mut labels: Vec<String> = get_system("propcalc").expect("catalog").into_iter().filter(|l| l != "mp").collect();
    labels.extend(get_system("EQ").expect("catalog"));
    let mut bad = Vec::new();
    for l in &labels {
        match axiomdb::scheme(l).map_err(|e| e.to_string()).and_then(|s| supertrue_quantifier_free(&s).map_err(|e| e.to_string())) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("{} not true", l)),
            Err(e) => bad.push(format!("{}: {}", l, e)),
        }
    }
    let pass = bad.is_empty();
    let detail = if pass { format!("{} schemes supertrue: {}", labels.len(), labels.join(", ")) } else { bad.join("; ") };
    result("quantifier-free", pass, "", detail)
}

/// `(∃xφ → ∀xφ) ∨ (∃xψ → ∀xψ)` without its DV condition, at `φ, ψ := x0 ≡ x1`.
pub fn prop_dv_scheme() -> (Scheme, Scheme) {
    let half = |k: u32| Metaformula::imp(Metaformula::exists(0, Metaformula::fm(k)), Metaformula::all(0, Metaformula::fm(k)));
    let with_dv = Scheme::new(vec![], Metaformula::or(half(0), half(1)), DvSet::from_pairs([(Metavariable::fm(0), Metavariable::fm(1))]));
    let bare = with_dv.clone().with_dv(DvSet::new());
    let sigma = Substitution::identity().formula(0, Metaformula::eq(0, 1)).formula(1, Metaformula::eq(0, 1));
    (with_dv, instantiate(&sigma, &bare, &DvSet::new()).expect("no DV left to violate"))
}

fn prop_dv(b: &Bounds) -> CheckResult {
    let (with_dv, inst) = prop_dv_scheme();
    let blocked = crate::schemes::check_legitimate(
        &Substitution::identity().formula(0, Metaformula::eq(0, 1)).formula(1, Metaformula::eq(0, 1)),
        &with_dv,
    )
    .is_err();
    let bounds = format!("domain={}", b.domain);
    match decide_eq_truth_capped(&inst, Some(b.domain)) {
        Ok(d) if !d.truth && blocked => {
            let ce = d.counterexample.map(|c| format!(" (`{}` fails at size {})", c.instance, c.size)).unwrap_or_default();
            result("prop-dv", true, bounds, format!("`{}` rejected{}; the substitution is blocked by DV", inst.concl(), ce))
        }
        Ok(d) => result("prop-dv", false, bounds, format!("truth {}, DV blocks substitution: {}", d.truth, blocked)),
        Err(e) => result("prop-dv", false, bounds, e.to_string()),
    }
}

fn appendix_a() -> CheckResult {
    let name = "mm:appendix-a";
    let db = match mm_parse(APPENDIX_A) {
        Ok(db) => db,
        Err(e) => return result(name, false, "", e.to_string()),
    };
    let r = mm_verify(&db);
    let proved = r.with_status(|s| *s == MmStatus::Verified);
    let incomplete = r.with_status(|s| *s == MmStatus::Incomplete);
    let all = derivable(&db, 6, 12);
    let nat: Vec<_> = all.keys().filter(|e| e[0] == "Nat").collect();
    let open: Vec<_> = nat.iter().filter(|e| e.iter().any(|s| db.variables.contains(s))).collect();
    let want_proved: BTreeSet<String> = ["n1", "n2"].iter().map(|s| s.to_string()).collect();
    let want_incomplete: BTreeSet<String> = ["nn".to_string()].into_iter().collect();
    let pass = proved == want_proved && incomplete == want_incomplete && r.all_ok() && open.is_empty();
    let detail = format!(
        "proved {:?}, incomplete {:?}; {} statements derivable to depth 6, {} with head Nat, {} of those with variables",
        proved,
        incomplete,
        all.len(),
        nat.len(),
        open.len()
    );
    result(name, pass, "depth=6", detail)
}

fn appendix_c(b: &Bounds) -> CheckResult {
    let name = "star:appendix-c";
    let lang = Language::new(&[("P", 1)]).expect("language");
    let s = StarTruthModel::standard();
    let p = parse_object_formula("P v0", &lang).expect("formula");
    let ap = parse_object_formula("A. v0 P v0", &lang).expect("formula");
    let bounds = format!("height={}", b.height);
    let run = || -> Result<(bool, bool, RuleCheck, RuleCheck), String> {
        let e = |e: crate::objectlevel::ObjectError| e.to_string();
        Ok((
            star_true(&s, &p).map_err(e)?,
            star_true(&s, &ap).map_err(e)?,
            star_rule_check(&s, &axiomdb::scheme("mp").expect("catalog"), &lang, b.height).map_err(e)?,
            star_rule_check(&s, &axiomdb::scheme("gen").expect("catalog"), &lang, b.height).map_err(e)?,
        ))
    };
    match run() {
        Err(e) => result(name, false, bounds, e),
        Ok((pt, apt, mp, gen)) => {
            let mp_ok = matches!(mp, RuleCheck::Preserves { .. });
            let gen_detail = match &gen {
                RuleCheck::Fails { instance, .. } => {
                    let hyps: Vec<String> = instance.hyps.iter().map(|h| h.to_string()).collect();
                    format!("gen fails: {} *-true, {} not", hyps.join(", "), instance.concl)
                }
                RuleCheck::Preserves { .. } => "gen preserves *-truth".to_string(),
            };
            let mp_detail = match &mp {
                RuleCheck::Preserves { formulas, classes, instances } => {
                    format!("mp preserves over {} formulas ({} classes, {} instances)", formulas, classes, instances)
                }
                RuleCheck::Fails { instance, .. } => format!("mp fails at {}", instance.concl),
            };
            let pass = pt && !apt && mp_ok && matches!(gen, RuleCheck::Fails { .. });
            result(name, pass, bounds, format!("P v0 *-true: {}; A. v0 P v0 *-true: {}; {}; {}", pt, apt, mp_detail, gen_detail))
        }
    }
}

/// Hypothesis-free proof lines of the bundled proofs that are free of
/// formula metavariables and predicates, as schemes under the proof's DV.
pub fn shadow_targets() -> Vec<(String, Scheme)> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (file, _, _) in proof_fixtures() {
        let s = script(file);
        for e in &s.proofs {
            if !e.proof.target.hyps().is_empty() {
                continue;
            }
            let dv = proof_dv(&e.proof);
            for line in &e.proof.lines {
                let f = &line.statement;
                if f.has_formula_mv() || f.has_predicate() {
                    continue;
                }
                let sch = Scheme::new(vec![], f.clone(), dv.clone());
                if seen.insert(sch.clone()) {
                    out.push((format!("{}/{}", file, e.proof.name), sch));
                }
            }
        }
    }
    out
}

fn soundness_shadow(b: &Bounds) -> CheckResult {
    let name = "soundness-shadow";
    let targets = shadow_targets();
    let mut bad = Vec::new();
    for (origin, s) in &targets {
        match decide_eq_truth_capped(s, Some(b.domain)) {
            Ok(d) if d.truth => {}
            Ok(_) => bad.push(format!("{}: `{}` decided false", origin, s.concl())),
            Err(e) => bad.push(format!("{}: {}", origin, e)),
        }
    }
    let bounds = format!("domain={}", b.domain);
    if bad.is_empty() {
        result(name, true, bounds, format!("{} distinct pure-equality proof lines decided true", targets.len()))
    } else {
        result(name, false, bounds, bad.join("; "))
    }
}

/// Runs the named checks (all when `only` is empty) on worker threads;
/// results come back in suite order. Unknown names are errors.
pub fn run_suite(b: &Bounds, only: &[String]) -> Result<Vec<CheckResult>, String> {
    let all = check_names();
    for n in only {
        if !all.contains(n) {
            return Err(format!("unknown check `{}`", n));
        }
    }
    let names: Vec<String> = if only.is_empty() { all } else { all.into_iter().filter(|n| only.contains(n)).collect() };
    let slots: Vec<Mutex<Option<CheckResult>>> = names.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(names.len()).max(1);
    std::thread::scope(|sc| {
        for _ in 0..workers {
            sc.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(n) = names.get(k) else { break };
                let r = run_check(n, b).expect("listed check");
                *slots[k].lock().expect("slot") = Some(r);
            });
        }
    });
    Ok(slots.into_iter().map(|m| m.into_inner().expect("slot").expect("filled")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_parse() {
        let mut b = Bounds::default();
        b.apply("height=2, closure=1").unwrap();
        assert_eq!(b, Bounds { height: 2, closure: 1, domain: 4 });
        assert!(b.apply("depth=2").is_err());
        assert!(b.apply("height=0").is_err());
        assert!(b.apply("height").is_err());
    }

    #[test]
    fn names_are_unique_and_known() {
        let n = check_names();
        let set: BTreeSet<&String> = n.iter().collect();
        assert_eq!(set.len(), n.len());
        assert!(n.contains(&"indep-subst".to_string()));
        assert!(run_check("no-such-check", &Bounds::default()).is_none());
        assert!(run_suite(&Bounds::default(), &["nope".into()]).is_err());
    }

    #[test]
    fn prop_dv_fixture() {
        let r = run_check("prop-dv", &Bounds::default()).unwrap();
        assert!(r.pass, "{}", r);
    }

    #[test]
    fn lower_gen_height_still_passes() {
        let mut b = Bounds::default();
        b.apply("height=2").unwrap();
        let r = run_suite(&b, &["indep-gen".into()]).unwrap();
        assert!(r[0].pass, "{}", r[0]);
        assert_eq!(r[0].bounds, "height=2");
    }
}
