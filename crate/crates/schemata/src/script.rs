//! Script files: language declarations, scheme and axiom blocks with
//! optional proofs, and independence certificates.
//!
//! ```text
//! language { P 1 ; Q 2 }
//! axiom ax-x { concl: ( f0 -> f0 ) }
//! scheme gen0 { system: TMM ; concl: A. x0 x0 = x0 ;
//!   proof: 1: x0 = x0 by EQrefl ; 2: A. x0 x0 = x0 by gen ( f0 := x0 = x0 ) from 1 }
//! cert indep-contrap { system: TMM ; except: contrap ; falsify: contrap ;
//!   model tt { values 3 ; imp { 0 1 1 ; 0 0 0 ; 0 0 0 } ; neg { 1 0 1 } ; ... }
//!   witness { f0 := v0 = v1 ; f1 := v0 = v0 } }
//! ```
//!
//! Parsing is a single pass: a name must be declared before it is used.
//! `#` starts a comment running to the end of the line.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axiomdb;
use crate::models::{
    CertWitness, EqRule, IndependenceCertificate, KripkeModel, ModelSpec, NeighborhoodModel, QuantRule,
    TruthTableModel,
};
use crate::models::genval::GenValuation;
use crate::objectlevel::{FirstOrderModel, ObjectFormula, ObjectSubstitution};
use crate::proof::{AxiomSet, Justification, ProofLine, ProofScript};
use crate::schemes::{DvSet, Scheme, Substitution};
use crate::transforms::{Mode, Refute, SupertruthCertificate, TransformSpec};
use crate::syntax::{read_formula, Language, Metaformula, Metavariable, MvKind, ParseError, TokenReader};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScriptErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Formula(ParseError),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("`{0}` is only declared later in the file")]
    ForwardReference(String),
    #[error("`{0}` declared twice")]
    Duplicate(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ScriptError {
    pub line: usize,
    pub kind: ScriptErrorKind,
}

/// A proof block with the axiom set it is checked against.
#[derive(Clone, Debug)]
pub struct ProofEntry {
    pub proof: ProofScript,
    pub axioms: AxiomSet,
    /// Source line of each proof line.
    pub source_lines: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Script {
    pub language: Language,
    /// Schemes and axioms in declaration order.
    pub schemes: Vec<(String, Scheme)>,
    pub axioms: BTreeSet<String>,
    pub proofs: Vec<ProofEntry>,
    pub certs: Vec<IndependenceCertificate>,
    /// Non-supertruth certificates with the notion they refute.
    pub supercerts: Vec<(SupertruthCertificate, Mode)>,
}

impl Script {
    pub fn scheme(&self, name: &str) -> Option<&Scheme> {
        self.schemes.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn cert(&self, name: &str) -> Option<&IndependenceCertificate> {
        self.certs.iter().find(|c| c.name == name)
    }

    pub fn supercert(&self, name: &str) -> Option<&(SupertruthCertificate, Mode)> {
        self.supercerts.iter().find(|(c, _)| c.name == name)
    }

    /// Labels a proved scheme ultimately rests on: catalog labels, axiom
    /// blocks and unproved schemes reached through cited lemmas.
    pub fn foundations(&self, name: &str) -> Option<BTreeSet<String>> {
        self.scheme(name)?;
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut todo = vec![name.to_string()];
        while let Some(n) = todo.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            match self.proofs.iter().find(|e| e.proof.name == n) {
                Some(e) => {
                    for line in &e.proof.lines {
                        if let Justification::ByAxiom { label, .. } = &line.justification {
                            todo.push(label.clone());
                        }
                    }
                }
                None => {
                    out.insert(n);
                }
            }
        }
        Some(out)
    }
}

fn lex(text: &str) -> (Vec<&str>, Vec<usize>) {
    let mut toks = Vec::new();
    let mut lines = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for word in line.split_whitespace() {
            let mut rest = word;
            while !rest.is_empty() {
                let end = rest.find(['(', ')', '{', '}', ';', ',']).unwrap_or(rest.len());
                let (head, tail) = if end == 0 { rest.split_at(1) } else { rest.split_at(end) };
                // `NAME:` splits, `:=` stays whole.
                match head.strip_suffix(':') {
                    Some(h) if !h.is_empty() => {
                        toks.push(h);
                        toks.push(":");
                        lines.push(ln + 1);
                    }
                    _ => toks.push(head),
                }
                lines.push(ln + 1);
                rest = tail;
            }
        }
    }
    (toks, lines)
}

struct Parser<'a> {
    r: TokenReader<'a>,
    lines: Vec<usize>,
    script: Script,
}

type Res<T> = Result<T, ScriptError>;

impl<'a> Parser<'a> {
    fn line(&self) -> usize {
        let p = self.r.pos.min(self.lines.len().saturating_sub(1));
        self.lines.get(p).copied().unwrap_or(0)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Res<T> {
        Err(ScriptError { line: self.line(), kind: ScriptErrorKind::Syntax(msg.into()) })
    }

    fn error(&self, kind: ScriptErrorKind) -> ScriptError {
        ScriptError { line: self.line(), kind }
    }

    fn peek(&self) -> Option<&'a str> {
        self.r.peek()
    }

    fn next(&mut self) -> Res<&'a str> {
        match self.r.next() {
            Some(t) => Ok(t),
            None => self.fail("unexpected end of file"),
        }
    }

    fn expect(&mut self, want: &str) -> Res<()> {
        let t = self.next()?;
        if t != want {
            self.r.pos -= 1;
            return self.fail(format!("expected `{}`, found `{}`", want, t));
        }
        Ok(())
    }

    fn eat(&mut self, want: &str) -> bool {
        if self.peek() == Some(want) {
            self.r.pos += 1;
            true
        } else {
            false
        }
    }

    fn number<T: std::str::FromStr>(&mut self) -> Res<T> {
        let t = self.next()?;
        t.parse().or_else(|_| {
            self.r.pos -= 1;
            self.fail(format!("expected a number, found `{}`", t))
        })
    }

    fn name(&mut self) -> Res<String> {
        let t = self.next()?;
        if matches!(t, "{" | "}" | ";" | "," | ":" | "(" | ")") {
            self.r.pos -= 1;
            return self.fail(format!("expected a name, found `{}`", t));
        }
        Ok(t.to_string())
    }

    fn formula(&mut self, prefix: char) -> Res<Metaformula> {
        let lang = self.script.language.clone();
        read_formula(&mut self.r, &lang, prefix).map_err(|e| {
            let pos = match &e {
                ParseError::Syntax { pos, .. }
                | ParseError::UnknownPredicate { pos, .. }
                | ParseError::ArityMismatch { pos, .. } => *pos,
            };
            ScriptError { line: self.lines.get(pos).copied().unwrap_or(0), kind: ScriptErrorKind::Formula(e) }
        })
    }

    fn object_formula(&mut self) -> Res<ObjectFormula> {
        let m = self.formula('v')?;
        Ok(ObjectFormula::from_tree(m).expect("object formulas have no formula metavariables"))
    }

    /// Comma-separated names up to `;` or `}`.
    fn name_list(&mut self) -> Res<Vec<String>> {
        let mut out = vec![self.name()?];
        while self.eat(",") {
            out.push(self.name()?);
        }
        Ok(out)
    }

    /// Entry terminator: `;`, or nothing before a closing brace.
    fn end_entry(&mut self) -> Res<()> {
        let after_block = self.r.pos > 0 && self.r.toks[self.r.pos - 1] == "}";
        if self.eat(";") || self.peek() == Some("}") || after_block {
            Ok(())
        } else {
            let t = self.peek().unwrap_or("end of file");
            self.fail(format!("expected `;`, found `{}`", t))
        }
    }

    fn declared_later(&self, name: &str) -> bool {
        let toks = &self.r.toks[self.r.pos..];
        toks.windows(2).any(|w| matches!(w[0], "scheme" | "axiom") && w[1] == name)
    }

    fn unresolved(&self, name: &str) -> ScriptError {
        if self.declared_later(name) {
            self.error(ScriptErrorKind::ForwardReference(name.to_string()))
        } else {
            self.error(ScriptErrorKind::UnknownLabel(name.to_string()))
        }
    }

    /// A scheme declared in the file, else a catalog label.
    fn resolve(&self, name: &str) -> Res<Scheme> {
        if let Some(s) = self.script.scheme(name) {
            return Ok(s.clone());
        }
        axiomdb::scheme(name).map_err(|_| self.unresolved(name))
    }

    fn file(mut self) -> Res<Script> {
        while let Some(t) = self.peek() {
            self.r.pos += 1;
            match t {
                "language" => self.language()?,
                "scheme" => self.scheme_block(false)?,
                "axiom" => self.scheme_block(true)?,
                "cert" => self.cert()?,
                "supercert" => self.supercert()?,
                _ => {
                    self.r.pos -= 1;
                    return self.fail(format!("expected a block keyword, found `{}`", t));
                }
            }
        }
        Ok(self.script)
    }

    fn language(&mut self) -> Res<()> {
        self.expect("{")?;
        while !self.eat("}") {
            let name = self.name()?;
            let arity = self.number()?;
            if let Err(e) = self.script.language.add(&name, arity) {
                return self.fail(e.to_string());
            }
            self.end_entry()?;
        }
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Res<()> {
        if self.script.scheme(name).is_some() || self.script.cert(name).is_some() || self.script.supercert(name).is_some() {
            return Err(self.error(ScriptErrorKind::Duplicate(name.to_string())));
        }
        Ok(())
    }

    fn metavariable(&mut self) -> Res<Metavariable> {
        let t = self.next()?;
        Metavariable::parse(t).ok_or_else(|| {
            ScriptError { line: self.line(), kind: ScriptErrorKind::Syntax(format!("expected a metavariable, found `{}`", t)) }
        })
    }

    fn scheme_block(&mut self, is_axiom: bool) -> Res<()> {
        let name = self.name()?;
        self.check_fresh(&name)?;
        self.expect("{")?;
        let body = self.scheme_body(&name)?;
        let proof = body.proof;
        self.script.schemes.push((name.clone(), body.scheme.clone()));
        if is_axiom {
            self.script.axioms.insert(name.clone());
        }
        if let Some((lines, source_lines)) = proof {
            let axioms = match body.axioms {
                Some(a) => a,
                None => self.default_axioms()?,
            };
            let mut p = ProofScript::new(&name, body.scheme, lines);
            p.hyp_names = body.hyp_names;
            self.script.proofs.push(ProofEntry { proof: p, axioms, source_lines });
        }
        Ok(())
    }

    fn default_axioms(&self) -> Res<AxiomSet> {
        let mut set = AxiomSet::from_system("TMM").map_err(|e| self.error(ScriptErrorKind::Syntax(e.to_string())))?;
        for a in &self.script.axioms {
            set.insert(a, self.script.scheme(a).expect("declared axiom").clone());
        }
        Ok(set)
    }

    /// Everything after the opening brace, through the closing one.
    fn scheme_body(&mut self, name: &str) -> Res<SchemeBody> {
        let mut dv = DvSet::new();
        let mut hyps = Vec::new();
        let mut hyp_names = Vec::new();
        let mut concl = None;
        let mut axioms = None;
        let mut proof = None;
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "dv" => {
                    self.expect(":")?;
                    let mut group = Vec::new();
                    while !matches!(self.peek(), Some(";") | Some("}")) {
                        group.push(self.metavariable()?);
                    }
                    dv.insert_group(&group);
                }
                "hyp" => {
                    let h = self.name()?;
                    self.expect(":")?;
                    hyp_names.push(h);
                    hyps.push(self.formula('x')?);
                }
                "concl" => {
                    self.expect(":")?;
                    concl = Some(self.formula('x')?);
                }
                "system" => {
                    self.expect(":")?;
                    let sys = self.name()?;
                    let mut set = AxiomSet::from_system(&sys).map_err(|_| self.unresolved(&sys))?;
                    for a in &self.script.axioms {
                        set.insert(a, self.script.scheme(a).expect("declared axiom").clone());
                    }
                    axioms = Some(set);
                }
                "axioms" => {
                    self.expect(":")?;
                    let mut set = AxiomSet::new();
                    for l in self.name_list()? {
                        let s = self.resolve(&l)?;
                        set.insert(&l, s);
                    }
                    axioms = Some(set);
                }
                "proof" => {
                    self.expect(":")?;
                    proof = Some(self.proof_lines(&hyp_names)?);
                    self.expect("}")?;
                    break;
                }
                other => return self.fail(format!("unknown entry `{}` in {}", other, name)),
            }
            self.end_entry()?;
        }
        let Some(concl) = concl else {
            return self.fail(format!("{} has no conclusion", name));
        };
        Ok(SchemeBody { scheme: Scheme::new(hyps, concl, dv), hyp_names, axioms, proof })
    }

    fn proof_lines(&mut self, hyp_names: &[String]) -> Res<(Vec<ProofLine>, Vec<usize>)> {
        let mut lines = Vec::new();
        let mut source = Vec::new();
        while self.peek() != Some("}") {
            let at = self.line();
            let k: usize = self.number()?;
            if k != lines.len() + 1 {
                return self.fail(format!("proof line {} out of sequence", k));
            }
            self.expect(":")?;
            let statement = self.formula('x')?;
            let justification = match self.next()? {
                "hyp" => {
                    let h = self.name()?;
                    let idx = hyp_names
                        .iter()
                        .position(|n| *n == h)
                        .or_else(|| h.parse::<usize>().ok().and_then(|i| i.checked_sub(1)))
                        .ok_or_else(|| self.error(ScriptErrorKind::UnknownLabel(h.clone())))?;
                    Justification::Hyp(idx)
                }
                "by" => {
                    let label = self.name()?;
                    let subst = if self.peek() == Some("(") { self.substitution()? } else { Substitution::identity() };
                    let mut premises = Vec::new();
                    if self.eat("from") {
                        loop {
                            let i: usize = self.number()?;
                            if i == 0 {
                                return self.fail("premise lines are numbered from 1");
                            }
                            premises.push(i - 1);
                            if !self.eat(",") {
                                break;
                            }
                        }
                    }
                    Justification::ByAxiom { label, subst, premises }
                }
                t => {
                    self.r.pos -= 1;
                    return self.fail(format!("expected `hyp` or `by`, found `{}`", t));
                }
            };
            lines.push(ProofLine { statement, justification });
            source.push(at);
            if !self.eat(";") {
                break;
            }
        }
        Ok((lines, source))
    }

    /// `( f0 := FMLA ; x0 := x1 )`.
    fn substitution(&mut self) -> Res<Substitution> {
        self.expect("(")?;
        let mut s = Substitution::identity();
        while !self.eat(")") {
            let m = self.metavariable()?;
            self.expect(":=")?;
            s = match m.kind {
                MvKind::Formula => s.formula(m.index, self.formula('x')?),
                MvKind::Var => s.var(m.index, self.r.var('x').map_err(|e| self.error(ScriptErrorKind::Formula(e)))?),
            };
            if !self.eat(";") && self.peek() != Some(")") {
                return self.fail("expected `;` or `)` in a substitution");
            }
        }
        Ok(s)
    }

    fn cert(&mut self) -> Res<()> {
        let name = self.name()?;
        self.check_fresh(&name)?;
        self.expect("{")?;
        let mut system: Vec<String> = Vec::new();
        let mut extra: Vec<String> = Vec::new();
        let mut except: BTreeSet<String> = BTreeSet::new();
        let mut also = Vec::new();
        let mut target = None;
        let mut model = None;
        let mut witness = None;
        let lang = self.script.language.clone();
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "system" => {
                    self.expect(":")?;
                    let sys = self.name()?;
                    system.extend(axiomdb::get_system(&sys).map_err(|_| self.unresolved(&sys))?);
                }
                "validate" | "also" | "except" => {
                    self.expect(":")?;
                    for l in self.name_list()? {
                        if key != "except" && crate::models::resolve_label(&l, &lang).is_none() {
                            return Err(self.unresolved(&l));
                        }
                        match key.as_str() {
                            "validate" => extra.push(l),
                            "also" => also.push(l),
                            _ => {
                                except.insert(l);
                            }
                        }
                    }
                }
                "falsify" => {
                    self.expect(":")?;
                    if self.eat("{") {
                        let body = self.scheme_body(&name)?;
                        target = Some((format!("{}-target", name), Some(body.scheme)));
                    } else {
                        let l = self.name()?;
                        let inline = match self.script.scheme(&l) {
                            Some(s) => Some(s.clone()),
                            None if crate::models::resolve_label(&l, &lang).is_some() => None,
                            None => return Err(self.unresolved(&l)),
                        };
                        target = Some((l, inline));
                    }
                }
                "model" => model = Some(self.model()?),
                "witness" => witness = Some(self.witness()?),
                other => return self.fail(format!("unknown entry `{}` in cert {}", other, name)),
            }
            self.end_entry()?;
        }
        let Some((target, target_scheme)) = target else {
            return self.fail(format!("cert {} has no falsify entry", name));
        };
        let Some(model) = model else {
            return self.fail(format!("cert {} has no model", name));
        };
        let mut validate: Vec<String> = Vec::new();
        for l in system.into_iter().chain(extra) {
            if !except.contains(&l) && !validate.contains(&l) {
                validate.push(l);
            }
        }
        self.script.certs.push(IndependenceCertificate {
            name,
            language: lang,
            validate,
            also_falsified: also,
            target,
            target_scheme,
            model,
            witness,
        });
        Ok(())
    }

    fn supercert(&mut self) -> Res<()> {
        let name = self.name()?;
        self.check_fresh(&name)?;
        self.expect("{")?;
        let mut target = None;
        let mut dv = DvSet::new();
        let mut mode = Mode::Supertruth;
        let mut instance = Substitution::identity();
        let mut transform = None;
        let mut then = None;
        let mut refute = None;
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "target" => {
                    self.expect(":")?;
                    let l = self.name()?;
                    target = Some((self.resolve(&l)?, l));
                }
                "dv" => {
                    self.expect(":")?;
                    let mut group = Vec::new();
                    while !matches!(self.peek(), Some(";") | Some("}")) {
                        group.push(self.metavariable()?);
                    }
                    dv.insert_group(&group);
                }
                "mode" => {
                    self.expect(":")?;
                    mode = match self.name()?.as_str() {
                        "supertrue" => Mode::Supertruth,
                        "semisupertrue" => Mode::Semisupertruth,
                        other => return self.fail(format!("unknown mode `{}`", other)),
                    };
                }
                "instance" => instance = self.substitution()?,
                "then" => then = Some(self.substitution()?),
                "transform" => {
                    self.expect(":")?;
                    let sym = self.eat("sym");
                    let (i, j) = (self.number()?, self.number()?);
                    transform = Some(if sym { TransformSpec::sym(i, j) } else { TransformSpec::directed(i, j) });
                }
                "refute" => {
                    self.expect(":")?;
                    if self.eat("eq-decide") {
                        refute = Some(Refute::EqDecide);
                    } else {
                        self.expect("model")?;
                        let ModelSpec::FirstOrder { model, .. } = self.model()? else {
                            return self.fail("a refuting model must be `fo`");
                        };
                        self.expect("witness")?;
                        let w = self.witness()?;
                        refute = Some(Refute::Model { model, tau: w.tau, assignment: w.assignment });
                    }
                }
                other => return self.fail(format!("unknown entry `{}` in supercert {}", other, name)),
            }
            self.end_entry()?;
        }
        let Some((scheme, target_label)) = target else {
            return self.fail(format!("supercert {} has no target", name));
        };
        let Some(transform) = transform else {
            return self.fail(format!("supercert {} has no transform", name));
        };
        let Some(refute) = refute else {
            return self.fail(format!("supercert {} has no refutation", name));
        };
        let target = scheme.clone().with_dv(scheme.dv().union(&dv));
        let c = SupertruthCertificate { name, target_label, target, instance, transform, then, refute };
        self.script.supercerts.push((c, mode));
        Ok(())
    }

    fn witness(&mut self) -> Res<CertWitness> {
        self.expect("{")?;
        let mut w = CertWitness::default();
        while !self.eat("}") {
            match self.peek() {
                Some("assign") => {
                    self.r.pos += 1;
                    let v = self.r.var('v').map_err(|e| self.error(ScriptErrorKind::Formula(e)))?;
                    self.expect("=")?;
                    let d = self.number()?;
                    w.assignment.insert(v, d);
                }
                Some("world") => {
                    self.r.pos += 1;
                    w.world = Some(self.name()?);
                }
                _ => {
                    let m = self.metavariable()?;
                    self.expect(":=")?;
                    match m.kind {
                        MvKind::Formula => {
                            let f = self.object_formula()?;
                            w.tau.fm.insert(m.index, f);
                        }
                        MvKind::Var => {
                            let v = self.r.var('v').map_err(|e| self.error(ScriptErrorKind::Formula(e)))?;
                            w.tau.vr.insert(m.index, v);
                        }
                    }
                }
            }
            self.end_entry()?;
        }
        Ok(w)
    }

    fn model(&mut self) -> Res<ModelSpec> {
        let kind = self.name()?;
        self.expect("{")?;
        let spec = match kind.as_str() {
            "tt" => ModelSpec::Table(self.tt_model()?),
            "fo" => self.fo_model()?,
            "gen" => ModelSpec::Gen(self.gen_model()?),
            "kripke" => ModelSpec::Kripke(self.kripke_model()?),
            "neighborhood" => ModelSpec::Neighborhood(self.neighborhood_model()?),
            "shape" => {
                self.expect("target")?;
                let target = self.object_formula()?;
                self.end_entry()?;
                self.expect("}")?;
                ModelSpec::Shape { target }
            }
            other => return self.fail(format!("unknown model kind `{}`", other)),
        };
        Ok(spec)
    }

    /// Numbers up to the closing brace, rows split by `;`.
    fn rows<T: std::str::FromStr>(&mut self) -> Res<Vec<Vec<T>>> {
        self.expect("{")?;
        let mut rows = vec![Vec::new()];
        while !self.eat("}") {
            if self.eat(";") {
                rows.push(Vec::new());
            } else {
                let n = self.number()?;
                rows.last_mut().expect("nonempty").push(n);
            }
        }
        if rows.last().is_some_and(Vec::is_empty) && rows.len() > 1 {
            rows.pop();
        }
        Ok(rows)
    }

    fn flat<T: std::str::FromStr>(&mut self) -> Res<Vec<T>> {
        Ok(self.rows()?.into_iter().flatten().collect())
    }

    fn tt_model(&mut self) -> Res<TruthTableModel> {
        let mut t = TruthTableModel::new(Vec::new(), Vec::new());
        t.value_count = 0;
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "values" => t.value_count = self.number()?,
                "imp" => t.imp = self.rows()?,
                "neg" => t.neg = self.flat()?,
                "designated" => t.designated = self.flat::<u8>()?.into_iter().collect(),
                "eq" => {
                    t.eq_rule = match self.next()? {
                        "const" => EqRule::Constant(self.number()?),
                        "ident" => EqRule::IdentityIndexed { same: self.number()?, diff: self.number()? },
                        other => return self.fail(format!("unknown equality rule `{}`", other)),
                    }
                }
                "quant" => {
                    t.quant = match self.next()? {
                        "ignore" => QuantRule::Ignore,
                        "monk" => QuantRule::MonkAllDistr,
                        other => return self.fail(format!("unknown quantifier rule `{}`", other)),
                    }
                }
                "pred" => {
                    let p = self.name()?;
                    let v = self.number()?;
                    t.pred_rule.insert(p, v);
                }
                other => return self.fail(format!("unknown tt entry `{}`", other)),
            }
            self.end_entry()?;
        }
        Ok(t)
    }

    fn fo_model(&mut self) -> Res<ModelSpec> {
        let mut size = None;
        let mut eq: Option<Vec<(usize, usize)>> = None;
        let mut total = false;
        let mut preds = Vec::new();
        let mut quant = None;
        let mut surrogate = 0;
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "size" => size = Some(self.number::<usize>()?),
                "eq" => {
                    if self.eat("standard") {
                        eq = None;
                    } else if self.eat("total") {
                        total = true;
                    } else {
                        let rows: Vec<Vec<usize>> = self.rows()?;
                        let mut pairs = Vec::new();
                        for r in rows.into_iter().filter(|r| !r.is_empty()) {
                            if r.len() != 2 {
                                return self.fail("equality pairs have two entries");
                            }
                            pairs.push((r[0], r[1]));
                        }
                        eq = Some(pairs);
                    }
                }
                "pred" => {
                    let p = self.name()?;
                    let Some(arity) = self.script.language.arity(&p) else {
                        return Err(self.error(ScriptErrorKind::UnknownLabel(p)));
                    };
                    let tuples: Vec<Vec<usize>> = self.rows()?.into_iter().filter(|r: &Vec<usize>| !r.is_empty()).collect();
                    preds.push((p, arity, tuples));
                }
                "quant" => quant = Some(self.flat()?),
                "surrogate" => surrogate = self.number()?,
                other => return self.fail(format!("unknown fo entry `{}`", other)),
            }
            self.end_entry()?;
        }
        let Some(size) = size else {
            return self.fail("fo model needs a size");
        };
        let mut m = FirstOrderModel::standard(size);
        if total {
            m = m.with_total_eq();
        } else if let Some(pairs) = eq {
            m = m.with_eq_pairs(pairs);
        }
        for (p, a, t) in preds {
            m = m.with_pred(&p, a, t);
        }
        if let Some(q) = quant {
            m = m.with_quant(q);
        }
        Ok(ModelSpec::FirstOrder { model: m, surrogate_support: surrogate })
    }

    fn gen_model(&mut self) -> Res<GenValuation> {
        let mut g = GenValuation::new(self.script.language.clone());
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "height" => g.height = self.number()?,
                "fresh" => g.fresh = self.number()?,
                other => return self.fail(format!("unknown gen entry `{}`", other)),
            }
            self.end_entry()?;
        }
        Ok(g)
    }

    fn worlds(&mut self) -> Res<Vec<String>> {
        let mut w = Vec::new();
        while !matches!(self.peek(), Some(";") | Some("}")) {
            w.push(self.name()?);
        }
        if w.is_empty() || w.len() > 64 {
            return self.fail("between 1 and 64 worlds");
        }
        Ok(w)
    }

    /// World names up to `;` or `}`, as a bit set; `-` is the empty set.
    fn world_set(&mut self, worlds: &[String]) -> Res<u64> {
        let mut bits = 0u64;
        while !matches!(self.peek(), Some(";") | Some("}")) {
            let n = self.name()?;
            if n == "-" {
                continue;
            }
            let Some(i) = worlds.iter().position(|w| *w == n) else {
                return self.fail(format!("unknown world `{}`", n));
            };
            bits |= 1 << i;
        }
        Ok(bits)
    }

    fn braced_world_set(&mut self, worlds: &[String]) -> Res<u64> {
        self.expect("{")?;
        let b = self.world_set(worlds)?;
        self.expect("}")?;
        Ok(b)
    }

    fn kripke_model(&mut self) -> Res<KripkeModel> {
        let mut worlds = Vec::new();
        let mut access = Vec::new();
        let mut preds = BTreeMap::new();
        let mut eq_everywhere = true;
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "worlds" => {
                    worlds = self.worlds()?;
                    access = vec![vec![false; worlds.len()]; worlds.len()];
                }
                "access" => {
                    self.expect("{")?;
                    while !self.eat("}") {
                        let a = self.name()?;
                        let b = self.name()?;
                        let (Some(i), Some(j)) =
                            (worlds.iter().position(|w| *w == a), worlds.iter().position(|w| *w == b))
                        else {
                            return self.fail(format!("unknown world in `{} {}`", a, b));
                        };
                        access[i][j] = true;
                        self.end_entry()?;
                    }
                }
                "pred" => {
                    let p = self.name()?;
                    let b = self.braced_world_set(&worlds)?;
                    preds.insert(p, b);
                }
                "eq" => eq_everywhere = self.eq_flag()?,
                other => return self.fail(format!("unknown kripke entry `{}`", other)),
            }
            self.end_entry()?;
        }
        Ok(KripkeModel { worlds, access, preds, eq_everywhere })
    }

    fn eq_flag(&mut self) -> Res<bool> {
        match self.next()? {
            "everywhere" => Ok(true),
            "nowhere" => Ok(false),
            other => self.fail(format!("expected `everywhere` or `nowhere`, found `{}`", other)),
        }
    }

    fn neighborhood_model(&mut self) -> Res<NeighborhoodModel> {
        let mut worlds = Vec::new();
        let mut nbhd = Vec::new();
        let mut preds = BTreeMap::new();
        let mut eq_everywhere = true;
        while !self.eat("}") {
            let key = self.name()?;
            match key.as_str() {
                "worlds" => {
                    worlds = self.worlds()?;
                    nbhd = vec![BTreeSet::new(); worlds.len()];
                }
                "nbhd" => {
                    let w = self.name()?;
                    let Some(i) = worlds.iter().position(|x| *x == w) else {
                        return self.fail(format!("unknown world `{}`", w));
                    };
                    self.expect("{")?;
                    while !self.eat("}") {
                        let s = self.world_set(&worlds)?;
                        nbhd[i].insert(s);
                        self.end_entry()?;
                    }
                }
                "pred" => {
                    let p = self.name()?;
                    let b = self.braced_world_set(&worlds)?;
                    preds.insert(p, b);
                }
                "eq" => eq_everywhere = self.eq_flag()?,
                other => return self.fail(format!("unknown neighborhood entry `{}`", other)),
            }
            self.end_entry()?;
        }
        Ok(NeighborhoodModel { worlds, nbhd, preds, eq_everywhere })
    }
}

struct SchemeBody {
    scheme: Scheme,
    hyp_names: Vec<String>,
    axioms: Option<AxiomSet>,
    proof: Option<(Vec<ProofLine>, Vec<usize>)>,
}

pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let (toks, lines) = lex(text);
    Parser { r: TokenReader { toks, pos: 0 }, lines, script: Script::default() }.file()
}

/// A substitution such as `f0 := x0 = x1 ; x1 := x2`, parentheses optional.
pub fn parse_substitution(text: &str, lang: &Language) -> Result<Substitution, ScriptError> {
    let wrapped = if text.trim_start().starts_with('(') { text.to_string() } else { format!("( {} )", text) };
    let (toks, lines) = lex(&wrapped);
    let script = Script { language: lang.clone(), ..Script::default() };
    let mut p = Parser { r: TokenReader { toks, pos: 0 }, lines, script };
    let sigma = p.substitution()?;
    if let Some(t) = p.peek() {
        return p.fail(format!("unexpected `{}` after the substitution", t));
    }
    Ok(sigma)
}

/// Proof-check every proof block; the error carries the source line.
pub fn verify_script(s: &Script) -> Result<usize, (String, ScriptError, crate::proof::KernelError)> {
    for e in &s.proofs {
        if let Err(k) = crate::proof::verify_proof(&e.proof, &e.axioms) {
            let line = k.line.checked_sub(1).and_then(|i| e.source_lines.get(i)).copied().unwrap_or(0);
            let se = ScriptError { line, kind: ScriptErrorKind::Syntax(k.kind.to_string()) };
            return Err((e.proof.name.clone(), se, k));
        }
    }
    Ok(s.proofs.len())
}

/// The identity witness written back as script text.
pub fn render_witness(tau: &ObjectSubstitution) -> String {
    let mut parts: Vec<String> = tau.fm.iter().map(|(k, v)| format!("f{} := {}", k, v)).collect();
    parts.extend(tau.vr.iter().map(|(k, v)| format!("x{} := v{}", k, v)));
    format!("witness {{ {} }}", parts.join(" ; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::check_certificate;
    use crate::proof::KernelErrorKind;

    const GEN0: &str = "
        scheme eqrefl-gen { axioms: gen, EQrefl ; concl: A. x0 x0 = x0 ;
          proof:
            1: x0 = x0 by EQrefl ;
            2: A. x0 x0 = x0 by gen ( f0 := x0 = x0 ) from 1
        }";

    #[test]
    fn proof_block_verifies() {
        let s = parse_script(GEN0).unwrap();
        assert_eq!(verify_script(&s).unwrap(), 1);
        assert_eq!(s.proofs[0].source_lines, vec![4, 5]);
    }

    #[test]
    fn tampered_line_reports_source_line() {
        let s = parse_script(&GEN0.replace("2: A. x0 x0 = x0", "2: A. x0 x0 = x1")).unwrap();
        let (_, se, k) = verify_script(&s).unwrap_err();
        assert_eq!(se.line, 5);
        assert!(matches!(k.kind, KernelErrorKind::LineMismatch { .. }));
    }

    #[test]
    fn forward_reference() {
        let text = "scheme a { axioms: b ; concl: f0 ; proof: 1: f0 by b } axiom b { concl: f0 }";
        assert!(matches!(parse_script(text).unwrap_err().kind, ScriptErrorKind::ForwardReference(_)));
        let text = "scheme a { axioms: nosuch ; concl: f0 }";
        assert!(matches!(parse_script(text).unwrap_err().kind, ScriptErrorKind::UnknownLabel(_)));
    }

    #[test]
    fn dv_groups_and_language() {
        let s = parse_script("language { P 1 ; in 2 }\nscheme s { dv: x0 x1 f0 ; concl: ( P x0 -> ( in x0 x1 -> f0 ) ) }").unwrap();
        assert_eq!(s.scheme("s").unwrap().dv().len(), 3);
        assert!(parse_script("scheme s { concl: P x0 }").is_err());
    }

    #[test]
    fn cert_block() {
        let text = "cert c { system: TMM ; except: contrap ; falsify: contrap ;
            model tt { values 3 ; imp { 0 1 1 ; 0 0 0 ; 0 0 0 } ; neg { 1 0 1 } ; designated { 0 } ;
                       eq ident 0 2 ; quant ignore }
            witness { f0 := v0 = v1 ; f1 := v0 = v0 } }";
        let s = parse_script(text).unwrap();
        let c = &s.certs[0];
        assert_eq!(c.validate.len(), 17);
        assert!(check_certificate(c).is_ok());
        let emptied = text.replace("designated { 0 }", "designated { }");
        let s = parse_script(&emptied).unwrap();
        assert!(matches!(check_certificate(&s.certs[0]), Err(crate::models::CertError::MalformedModel(_))));
    }

    #[test]
    fn comments_and_errors_have_lines() {
        let e = parse_script("# header\nscheme s {\n concl: ( f0 -> ) }").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(parse_script("scheme s { concl: f0 } scheme s { concl: f1 }").unwrap_err().kind, ScriptErrorKind::Duplicate(_)));
    }

    #[test]
    fn supercert_block() {
        let text = "supercert c { target: spec ; mode: semisupertrue ; instance ( f0 := x0 = x1 ) ;
            transform: sym 0 1 ; refute: eq-decide }";
        let s = parse_script(text).unwrap();
        let (c, mode) = s.supercert("c").unwrap();
        assert_eq!(*mode, crate::transforms::Mode::Semisupertruth);
        assert!(crate::transforms::verify_not_supertrue(c, *mode).is_ok());
        assert!(parse_script(&text.replace("refute: eq-decide", "")).is_err());
        assert!(parse_script(&text.replace("semisupertrue", "sometimes")).is_err());
    }

    #[test]
    fn substitution_text() {
        let s = parse_substitution("f0 := x0 = x1 ; x1 := x2", &Language::empty()).unwrap();
        assert_eq!(s, Substitution::identity().formula(0, Metaformula::eq(0, 1)).var(1, 2));
        assert!(parse_substitution("( x1 := x2 ) junk", &Language::empty()).is_err());
        assert!(parse_substitution("x1 := f0", &Language::empty()).is_err());
    }
}
