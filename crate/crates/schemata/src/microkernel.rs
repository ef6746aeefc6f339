//! A verifier for a small Metamath subset: `$c $v $f $e $a $p $d`, scopes
//! and comments, with uncompressed proofs only.
//!
//! Independent of the typed kernel in [`crate::proof`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MmParseError {
    #[error("lex error at token {pos}: {msg}")]
    LexError { pos: usize, msg: String },
    #[error("scope error at token {pos}: {msg}")]
    ScopeError { pos: usize, msg: String },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MmVerifyError {
    #[error("stack underflow at step {step} (`{label}`)")]
    StackUnderflow { step: usize, label: String },
    #[error("hypothesis `{hyp}` of `{label}` does not match `{found}`")]
    SubstitutionMismatch { label: String, hyp: String, found: String },
    #[error("`{label}` needs {a} and {b} disjoint")]
    DisjointViolation { label: String, a: String, b: String },
    #[error("{0} entries left on the stack")]
    FinalStackNotSingleton(usize),
    #[error("proved `{found}`, expected `{expected}`")]
    WrongConclusion { expected: String, found: String },
    #[error("unknown or inactive label `{0}` in proof")]
    UnknownLabel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypKind {
    Floating,
    Essential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Floating,
    Essential,
    Axiom,
    Provable,
}

/// A symbol string: typecode first.
pub type Expr = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// Mandatory hypotheses in order: label, kind, statement.
    pub hyps: Vec<(String, HypKind, Expr)>,
    /// Mandatory disjoint pairs, each ordered.
    pub dv: BTreeSet<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub label: String,
    pub kind: StmtKind,
    pub expr: Expr,
    /// Assertions only.
    pub frame: Option<Frame>,
    /// `$p` only; `None` entries are `?`.
    pub proof: Option<Vec<Option<String>>>,
    /// Every `$d` pair active at the statement, for checking its proof.
    pub active_dv: BTreeSet<(String, String)>,
    /// Hypotheses in scope at the statement, by label.
    pub active_hyps: BTreeSet<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MmDatabase {
    pub constants: Vec<String>,
    pub variables: Vec<String>,
    pub statements: Vec<Statement>,
    pub comments: Vec<String>,
}

impl MmDatabase {
    pub fn get(&self, label: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.label == label)
    }

    /// Labeled statements other than essential hypotheses.
    pub fn assertion_count(&self) -> usize {
        self.statements.iter().filter(|s| s.kind != StmtKind::Essential).count()
    }
}

#[derive(Default)]
struct Scope {
    vars: Vec<String>,
    floats: Vec<(String, String, String)>, // label, typecode, variable
    ess: Vec<(String, Expr)>,
    dv: BTreeSet<(String, String)>,
}

fn pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

fn tokens(text: &str) -> Result<Vec<&str>, MmParseError> {
    let mut out = Vec::new();
    for (pos, t) in text.split_whitespace().enumerate() {
        if !t.is_ascii() {
            return Err(MmParseError::LexError { pos, msg: format!("non-ASCII token `{}`", t) });
        }
        out.push(t);
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<&'a str>,
    pos: usize,
    scopes: Vec<Scope>,
    db: MmDatabase,
    labels: HashSet<String>,
}

impl<'a> Parser<'a> {
    fn lex<T>(&self, msg: impl Into<String>) -> Result<T, MmParseError> {
        Err(MmParseError::LexError { pos: self.pos, msg: msg.into() })
    }

    fn scope_err<T>(&self, msg: impl Into<String>) -> Result<T, MmParseError> {
        Err(MmParseError::ScopeError { pos: self.pos, msg: msg.into() })
    }

    fn next(&mut self) -> Result<&'a str, MmParseError> {
        let t = self.toks.get(self.pos).copied();
        self.pos += 1;
        match t {
            Some(t) => Ok(t),
            None => self.lex("unexpected end of input"),
        }
    }

    /// Tokens up to `end`, skipping comments.
    fn until(&mut self, end: &str) -> Result<Vec<&'a str>, MmParseError> {
        let mut out = Vec::new();
        loop {
            let t = self.next()?;
            if t == end {
                return Ok(out);
            }
            if t == "$(" {
                self.comment()?;
                continue;
            }
            if t.starts_with('$') {
                return self.lex(format!("`{}` inside a statement", t));
            }
            out.push(t);
        }
    }

    fn comment(&mut self) -> Result<(), MmParseError> {
        let mut words = Vec::new();
        loop {
            let t = self.next()?;
            if t == "$)" {
                self.db.comments.push(words.join(" "));
                return Ok(());
            }
            if t == "$(" {
                return self.lex("nested comment");
            }
            words.push(t);
        }
    }

    fn is_const(&self, s: &str) -> bool {
        self.db.constants.iter().any(|c| c == s)
    }

    fn active_var(&self, s: &str) -> bool {
        self.scopes.iter().any(|sc| sc.vars.iter().any(|v| v == s))
    }

    fn float_of(&self, v: &str) -> Option<&(String, String, String)> {
        self.scopes.iter().rev().flat_map(|sc| sc.floats.iter()).find(|f| f.2 == v)
    }

    fn check_expr(&self, e: &[&str]) -> Result<(), MmParseError> {
        let Some(tc) = e.first() else {
            return self.lex("empty statement");
        };
        if !self.is_const(tc) {
            return self.lex(format!("typecode `{}` is not a constant", tc));
        }
        for s in e {
            if self.is_const(s) {
                continue;
            }
            if !self.active_var(s) {
                return self.lex(format!("undeclared math symbol `{}`", s));
            }
            if self.float_of(s).is_none() {
                return self.scope_err(format!("variable `{}` has no active $f", s));
            }
        }
        Ok(())
    }

    fn new_label(&mut self, l: &str) -> Result<(), MmParseError> {
        if !self.labels.insert(l.to_string()) {
            return Err(MmParseError::DuplicateLabel(l.to_string()));
        }
        Ok(())
    }

    fn frame_for(&self, expr: &Expr) -> Frame {
        let mut vars: HashSet<&str> = HashSet::new();
        let ess: Vec<(String, Expr)> = self.scopes.iter().flat_map(|sc| sc.ess.iter().cloned()).collect();
        for e in ess.iter().map(|(_, e)| e).chain(std::iter::once(expr)) {
            for s in e.iter().filter(|s| !self.is_const(s)) {
                vars.insert(s);
            }
        }
        // Hypotheses in order of appearance: walk scopes outer to inner,
        // interleaving by the order labels were declared.
        let mut hyps: Vec<(usize, String, HypKind, Expr)> = Vec::new();
        let order = |l: &str| self.db.statements.iter().position(|s| s.label == l).unwrap_or(usize::MAX);
        for sc in &self.scopes {
            for (l, tc, v) in &sc.floats {
                if vars.contains(v.as_str()) {
                    hyps.push((order(l), l.clone(), HypKind::Floating, vec![tc.clone(), v.clone()]));
                }
            }
            for (l, e) in &sc.ess {
                hyps.push((order(l), l.clone(), HypKind::Essential, e.clone()));
            }
        }
        hyps.sort_by_key(|h| h.0);
        let dv = self
            .scopes
            .iter()
            .flat_map(|sc| sc.dv.iter())
            .filter(|(a, b)| vars.contains(a.as_str()) && vars.contains(b.as_str()))
            .cloned()
            .collect();
        Frame { hyps: hyps.into_iter().map(|(_, l, k, e)| (l, k, e)).collect(), dv }
    }

    fn active_dv(&self) -> BTreeSet<(String, String)> {
        self.scopes.iter().flat_map(|sc| sc.dv.iter().cloned()).collect()
    }

    fn active_hyps(&self) -> BTreeSet<String> {
        self.scopes
            .iter()
            .flat_map(|sc| sc.floats.iter().map(|f| f.0.clone()).chain(sc.ess.iter().map(|e| e.0.clone())))
            .collect()
    }

    fn push(&mut self, label: &str, kind: StmtKind, expr: Expr, proof: Option<Vec<Option<String>>>) {
        let frame = matches!(kind, StmtKind::Axiom | StmtKind::Provable).then(|| self.frame_for(&expr));
        let st = Statement {
            label: label.to_string(),
            kind,
            expr,
            frame,
            proof,
            active_dv: self.active_dv(),
            active_hyps: self.active_hyps(),
        };
        self.db.statements.push(st);
    }

    fn run(mut self) -> Result<MmDatabase, MmParseError> {
        while self.pos < self.toks.len() {
            let t = self.next()?;
            match t {
                "$(" => self.comment()?,
                "${" => self.scopes.push(Scope::default()),
                "$}" => {
                    if self.scopes.len() <= 1 {
                        return self.scope_err("`$}` without `${`");
                    }
                    self.scopes.pop();
                }
                "$c" => {
                    if self.scopes.len() > 1 {
                        return self.scope_err("`$c` inside a block");
                    }
                    for c in self.until("$.")? {
                        if self.is_const(c) || self.db.variables.iter().any(|v| v == c) {
                            return self.lex(format!("`{}` declared twice", c));
                        }
                        self.db.constants.push(c.to_string());
                    }
                }
                "$v" => {
                    for v in self.until("$.")? {
                        if self.is_const(v) || self.active_var(v) {
                            return self.lex(format!("`{}` declared twice", v));
                        }
                        if !self.db.variables.iter().any(|w| w == v) {
                            self.db.variables.push(v.to_string());
                        }
                        self.scopes.last_mut().expect("outer scope").vars.push(v.to_string());
                    }
                }
                "$d" => {
                    let vs = self.until("$.")?;
                    for v in &vs {
                        if !self.active_var(v) {
                            return self.lex(format!("`$d` on non-variable `{}`", v));
                        }
                    }
                    for (k, a) in vs.iter().enumerate() {
                        for b in &vs[k + 1..] {
                            if a == b {
                                return self.lex(format!("`$d` repeats `{}`", a));
                            }
                            self.scopes.last_mut().expect("outer scope").dv.insert(pair(a, b));
                        }
                    }
                }
                "$[" => return self.lex("file inclusion is not supported"),
                _ if t.starts_with('$') => return self.lex(format!("unsupported keyword `{}`", t)),
                label => {
                    if !label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')) {
                        return self.lex(format!("bad label `{}`", label));
                    }
                    let kw = self.next()?;
                    self.new_label(label)?;
                    match kw {
                        "$f" => {
                            let e = self.until("$.")?;
                            if e.len() != 2 || !self.is_const(e[0]) || !self.active_var(e[1]) {
                                return self.lex(format!("malformed $f `{}`", label));
                            }
                            if self.float_of(e[1]).is_some() {
                                return self.scope_err(format!("second active $f for `{}`", e[1]));
                            }
                            let (tc, v) = (e[0].to_string(), e[1].to_string());
                            self.push(label, StmtKind::Floating, vec![tc.clone(), v.clone()], None);
                            self.scopes.last_mut().expect("outer scope").floats.push((label.to_string(), tc, v));
                        }
                        "$e" => {
                            let e = self.until("$.")?;
                            self.check_expr(&e)?;
                            let e: Expr = e.iter().map(|s| s.to_string()).collect();
                            self.push(label, StmtKind::Essential, e.clone(), None);
                            self.scopes.last_mut().expect("outer scope").ess.push((label.to_string(), e));
                        }
                        "$a" => {
                            let e = self.until("$.")?;
                            self.check_expr(&e)?;
                            let e = e.iter().map(|s| s.to_string()).collect();
                            self.push(label, StmtKind::Axiom, e, None);
                        }
                        "$p" => {
                            let e = self.until("$=")?;
                            self.check_expr(&e)?;
                            let e = e.iter().map(|s| s.to_string()).collect();
                            let proof = self.until("$.")?;
                            if proof.first() == Some(&"(") {
                                return self.lex("compressed proofs are not supported");
                            }
                            let proof = proof.iter().map(|s| (*s != "?").then(|| s.to_string())).collect();
                            self.push(label, StmtKind::Provable, e, Some(proof));
                        }
                        other => return self.lex(format!("expected a statement keyword after `{}`, found `{}`", label, other)),
                    }
                }
            }
        }
        if self.scopes.len() != 1 {
            return self.scope_err("unclosed `${`");
        }
        Ok(self.db)
    }
}

pub fn mm_parse(text: &str) -> Result<MmDatabase, MmParseError> {
    let toks = tokens(text)?;
    let p = Parser { toks, pos: 0, scopes: vec![Scope::default()], db: MmDatabase::default(), labels: HashSet::new() };
    p.run()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MmStatus {
    Verified,
    Incomplete,
    Failed(MmVerifyError),
}

impl fmt::Display for MmStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MmStatus::Verified => write!(f, "verified"),
            MmStatus::Incomplete => write!(f, "incomplete"),
            MmStatus::Failed(e) => write!(f, "error: {}", e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmReport {
    pub results: Vec<(String, MmStatus)>,
}

impl MmReport {
    pub fn status(&self, label: &str) -> Option<&MmStatus> {
        self.results.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    pub fn with_status(&self, pred: impl Fn(&MmStatus) -> bool) -> BTreeSet<String> {
        self.results.iter().filter(|(_, s)| pred(s)).map(|(l, _)| l.clone()).collect()
    }

    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|(_, s)| !matches!(s, MmStatus::Failed(_)))
    }
}

impl fmt::Display for MmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, s) in &self.results {
            writeln!(f, "{} {}", l, s)?;
        }
        Ok(())
    }
}

fn show(e: &[String]) -> String {
    e.join(" ")
}

fn subst(e: &[String], sigma: &HashMap<String, Expr>) -> Expr {
    let mut out = Vec::new();
    for s in e {
        match sigma.get(s) {
            Some(r) => out.extend(r.iter().cloned()),
            None => out.push(s.clone()),
        }
    }
    out
}

/// Applies assertion `a` to the hypothesis entries `args`, in frame order.
fn apply(a: &Statement, args: &[Expr]) -> Result<(Expr, HashMap<String, Expr>), MmVerifyError> {
    let frame = a.frame.as_ref().expect("assertion");
    let mut sigma: HashMap<String, Expr> = HashMap::new();
    for ((hl, kind, he), arg) in frame.hyps.iter().zip(args) {
        match kind {
            HypKind::Floating => {
                if arg.is_empty() || arg[0] != he[0] {
                    return Err(MmVerifyError::SubstitutionMismatch { label: a.label.clone(), hyp: hl.clone(), found: show(arg) });
                }
                sigma.insert(he[1].clone(), arg[1..].to_vec());
            }
            HypKind::Essential => {
                if &subst(he, &sigma) != arg {
                    return Err(MmVerifyError::SubstitutionMismatch { label: a.label.clone(), hyp: hl.clone(), found: show(arg) });
                }
            }
        }
    }
    Ok((subst(&a.expr, &sigma), sigma))
}

fn verify_one(db: &MmDatabase, idx: usize) -> MmStatus {
    let st = &db.statements[idx];
    let proof = st.proof.as_ref().expect("provable");
    if proof.iter().any(|s| s.is_none()) {
        return MmStatus::Incomplete;
    }
    let is_var = |s: &str| db.variables.iter().any(|v| v == s);
    let mut stack: Vec<Expr> = Vec::new();
    for (step, label) in proof.iter().flatten().enumerate() {
        let Some(k) = db.statements[..idx].iter().position(|s| &s.label == label) else {
            return MmStatus::Failed(MmVerifyError::UnknownLabel(label.clone()));
        };
        let a = &db.statements[k];
        match a.kind {
            StmtKind::Floating | StmtKind::Essential => {
                if !st.active_hyps.contains(label) {
                    return MmStatus::Failed(MmVerifyError::UnknownLabel(label.clone()));
                }
                stack.push(a.expr.clone());
            }
            StmtKind::Axiom | StmtKind::Provable => {
                let n = a.frame.as_ref().expect("assertion").hyps.len();
                if stack.len() < n {
                    return MmStatus::Failed(MmVerifyError::StackUnderflow { step: step + 1, label: label.clone() });
                }
                let args = stack.split_off(stack.len() - n);
                let (out, sigma) = match apply(a, &args) {
                    Ok(r) => r,
                    Err(e) => return MmStatus::Failed(e),
                };
                for (x, y) in &a.frame.as_ref().expect("assertion").dv {
                    let vx: Vec<&String> = sigma.get(x).into_iter().flatten().filter(|s| is_var(s)).collect();
                    let vy: Vec<&String> = sigma.get(y).into_iter().flatten().filter(|s| is_var(s)).collect();
                    for u in &vx {
                        for w in &vy {
                            if u == w || !st.active_dv.contains(&pair(u, w)) {
                                return MmStatus::Failed(MmVerifyError::DisjointViolation {
                                    label: label.clone(),
                                    a: u.to_string(),
                                    b: w.to_string(),
                                });
                            }
                        }
                    }
                }
                stack.push(out);
            }
        }
    }
    match stack.len() {
        1 if stack[0] == st.expr => MmStatus::Verified,
        1 => MmStatus::Failed(MmVerifyError::WrongConclusion { expected: show(&st.expr), found: show(&stack[0]) }),
        n => MmStatus::Failed(MmVerifyError::FinalStackNotSingleton(n)),
    }
}

/// Verifies every `$p` in order.
pub fn mm_verify(db: &MmDatabase) -> MmReport {
    let results = db
        .statements
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind == StmtKind::Provable)
        .map(|(i, s)| (s.label.clone(), verify_one(db, i)))
        .collect();
    MmReport { results }
}

/// Statements derivable in at most `depth` rounds from the top-level
/// floating hypotheses, the axioms and the verified `$p`s.
///
/// Round `k` applies every assertion to hypotheses met by statements of
/// earlier rounds. Results longer than `max_len` symbols are dropped.
pub fn derivable(db: &MmDatabase, depth: usize, max_len: usize) -> BTreeMap<Expr, usize> {
    let report = mm_verify(db);
    let is_var = |s: &str| db.variables.iter().any(|v| v == s);
    // Hypotheses and `$d`s in force at the end of the file.
    let top_hyps: BTreeSet<String> = db.statements.last().map(|s| s.active_hyps.clone()).unwrap_or_default();
    let top_dv = db.statements.last().map(|s| s.active_dv.clone()).unwrap_or_default();
    let mut known: BTreeMap<Expr, usize> = BTreeMap::new();
    for s in &db.statements {
        if s.kind == StmtKind::Floating && top_hyps.contains(&s.label) {
            known.insert(s.expr.clone(), 0);
        }
    }
    let rules: Vec<&Statement> = db
        .statements
        .iter()
        .filter(|s| match s.kind {
            StmtKind::Axiom => true,
            StmtKind::Provable => report.status(&s.label) == Some(&MmStatus::Verified),
            _ => false,
        })
        .collect();
    for round in 1..=depth {
        let pool: Vec<Expr> = known.keys().cloned().collect();
        let mut fresh = Vec::new();
        for a in &rules {
            let hyps = &a.frame.as_ref().expect("assertion").hyps;
            let mut choice = vec![0usize; hyps.len()];
            'combos: loop {
                if hyps.iter().zip(&choice).all(|((_, _, he), &c)| pool.get(c).is_some_and(|e| e[0] == he[0])) {
                    let args: Vec<Expr> = choice.iter().map(|&c| pool[c].clone()).collect();
                    if let Ok((out, sigma)) = apply(a, &args) {
                        let dv_ok = a.frame.as_ref().expect("assertion").dv.iter().all(|(x, y)| {
                            let vy: Vec<&String> = sigma.get(y).into_iter().flatten().filter(|s| is_var(s)).collect();
                            let mut vx = sigma.get(x).into_iter().flatten().filter(|s| is_var(s));
                            vx.all(|u| vy.iter().all(|w| u != *w && top_dv.contains(&pair(u, w))))
                        });
                        if dv_ok && out.len() <= max_len && !known.contains_key(&out) {
                            fresh.push(out);
                        }
                    }
                }
                for d in choice.iter_mut() {
                    *d += 1;
                    if *d < pool.len() {
                        continue 'combos;
                    }
                    *d = 0;
                }
                break;
            }
        }
        for e in fresh {
            known.entry(e).or_insert(round);
        }
    }
    known
}

pub const APPENDIX_A: &str = include_str!("../../../fixtures/appendix_a.mm");
