//! Proof kernel: scripts with explicit justifications, `DV(P)`, the
//! substitution action on proofs (with dummy renaming) and the transform
//! action on proofs.
//!
//! Each non-hypothesis line cites an axiom label, the substitution that
//! instantiates it and the premise lines. Checking is linear in proof
//! length; the kernel never searches and never invents DV conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::schemes::{
    check_legitimate, dv_violation, propagate_dv, DvPair, DvSet, DvViolation, Scheme, SchemeError,
    Substitution,
};
use crate::syntax::{Metaformula, Metavariable, MvKind};
use crate::transforms::{transform, transform_scheme, TransformError, TransformSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Index into the target's hypothesis list.
    Hyp(usize),
    /// Axiom label, instantiating substitution, 0-based premise line indices.
    ByAxiom { label: String, subst: Substitution, premises: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub statement: Metaformula,
    pub justification: Justification,
}

impl ProofLine {
    pub fn hyp(statement: Metaformula, index: usize) -> Self {
        ProofLine { statement, justification: Justification::Hyp(index) }
    }

    pub fn by(statement: Metaformula, label: &str, subst: Substitution, premises: &[usize]) -> Self {
        ProofLine {
            statement,
            justification: Justification::ByAxiom {
                label: label.to_string(),
                subst,
                premises: premises.to_vec(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub name: String,
    pub target: Scheme,
    pub hyp_names: Vec<String>,
    pub lines: Vec<ProofLine>,
}

impl ProofScript {
    pub fn new(name: &str, target: Scheme, lines: Vec<ProofLine>) -> Self {
        let hyp_names = (1..=target.hyps().len()).map(|k| format!("h{}", k)).collect();
        ProofScript { name: name.to_string(), target, hyp_names, lines }
    }

    /// `OC(P)`: target plus every line.
    pub fn occurring(&self) -> BTreeSet<Metavariable> {
        let mut oc = self.target.occurring();
        for l in &self.lines {
            l.statement.collect_occurring(&mut oc);
        }
        oc
    }

    pub fn dummies(&self) -> BTreeSet<Metavariable> {
        let t = self.target.occurring();
        self.occurring().into_iter().filter(|m| !t.contains(m)).collect()
    }
}

/// Axioms by label, optionally marked as the transformed set `S^{(i,j)}`,
/// whose members are the transforms of instances of the base schemes.
#[derive(Clone, Debug, Default)]
pub struct AxiomSet {
    schemes: BTreeMap<String, Scheme>,
    transform: Option<TransformSpec>,
}

impl AxiomSet {
    pub fn new() -> Self {
        AxiomSet::default()
    }

    pub fn insert(&mut self, label: &str, s: Scheme) {
        self.schemes.insert(label.to_string(), s);
    }

    pub fn get(&self, label: &str) -> Option<&Scheme> {
        self.schemes.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.schemes.keys().map(String::as_str)
    }

    pub fn transform_marker(&self) -> Option<TransformSpec> {
        self.transform
    }

    pub fn transformed(&self, spec: TransformSpec) -> AxiomSet {
        AxiomSet { schemes: self.schemes.clone(), transform: Some(spec) }
    }

    /// Catalog axioms for the given labels (aliases resolve to the label given).
    pub fn from_labels<'a, I: IntoIterator<Item = &'a str>>(
        labels: I,
    ) -> Result<AxiomSet, crate::axiomdb::AxiomDbError> {
        let mut s = AxiomSet::new();
        for l in labels {
            s.insert(l, crate::axiomdb::scheme(l)?);
        }
        Ok(s)
    }

    pub fn from_system(name: &str) -> Result<AxiomSet, crate::axiomdb::AxiomDbError> {
        let labels = crate::axiomdb::get_system(name)?;
        AxiomSet::from_labels(labels.iter().map(String::as_str))
    }
}

/// `DV(P) = DV(Φ) ∪ {{m,n} | m dummy, n ∈ OC(P)}`.
pub fn proof_dv(p: &ProofScript) -> DvSet {
    let mut dv = p.target.dv().clone();
    let oc = p.occurring();
    for &m in &p.dummies() {
        for &n in &oc {
            dv.insert(m, n);
        }
    }
    dv
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelErrorKind {
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("premise line {premise} does not precede its use")]
    PremiseOutOfOrder { premise: usize },
    #[error("axiom `{label}` takes {expected} premises, {found} cited")]
    PremiseCount { label: String, expected: usize, found: usize },
    #[error("no hypothesis #{0}")]
    UnknownHypothesis(usize),
    #[error("line mismatch: expected `{expected}`, found `{found}`")]
    LineMismatch { expected: Metaformula, found: Metaformula },
    #[error("premise line {premise} mismatch: expected `{expected}`, found `{found}`")]
    PremiseMismatch { premise: usize, expected: Metaformula, found: Metaformula },
    #[error("illegitimate substitution: {0}")]
    IllegitimateSubstitution(DvViolation),
    #[error("DV({}, {}) required but not in DV(P)", .0.0, .0.1)]
    DvViolation(DvPair),
    #[error("{0}")]
    IllegitimateTransform(TransformError),
    #[error("last line `{found}` is not the conclusion `{expected}`")]
    WrongConclusion { expected: Metaformula, found: Metaformula },
    #[error("empty proof")]
    Empty,
}

/// A failure at a 1-based line number (0 for proof-level failures).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct KernelError {
    pub line: usize,
    pub kind: KernelErrorKind,
}

fn err(line: usize, kind: KernelErrorKind) -> KernelError {
    KernelError { line: line + 1, kind }
}

/// Verifies every line and the conclusion; stops at the first failure.
pub fn verify_proof(p: &ProofScript, axioms: &AxiomSet) -> Result<(), KernelError> {
    let dv = proof_dv(p);
    for (k, line) in p.lines.iter().enumerate() {
        check_line(p, axioms, &dv, k, line)?;
    }
    let Some(last) = p.lines.last() else {
        return Err(KernelError { line: 0, kind: KernelErrorKind::Empty });
    };
    if &last.statement != p.target.concl() {
        return Err(err(
            p.lines.len() - 1,
            KernelErrorKind::WrongConclusion {
                expected: p.target.concl().clone(),
                found: last.statement.clone(),
            },
        ));
    }
    Ok(())
}

fn check_line(
    p: &ProofScript,
    axioms: &AxiomSet,
    dv: &DvSet,
    k: usize,
    line: &ProofLine,
) -> Result<(), KernelError> {
    match &line.justification {
        Justification::Hyp(h) => {
            let Some(want) = p.target.hyps().get(*h) else {
                return Err(err(k, KernelErrorKind::UnknownHypothesis(*h)));
            };
            if want != &line.statement {
                return Err(err(
                    k,
                    KernelErrorKind::LineMismatch { expected: want.clone(), found: line.statement.clone() },
                ));
            }
            Ok(())
        }
        Justification::ByAxiom { label, subst, premises } => {
            let Some(ax) = axioms.get(label) else {
                return Err(err(k, KernelErrorKind::UnknownAxiom(label.clone())));
            };
            if let Some(&bad) = premises.iter().find(|&&i| i >= k) {
                return Err(err(k, KernelErrorKind::PremiseOutOfOrder { premise: bad + 1 }));
            }
            if premises.len() != ax.hyps().len() {
                return Err(err(
                    k,
                    KernelErrorKind::PremiseCount {
                        label: label.clone(),
                        expected: ax.hyps().len(),
                        found: premises.len(),
                    },
                ));
            }
            if let Err(v) = check_legitimate(subst, ax) {
                return Err(err(k, KernelErrorKind::IllegitimateSubstitution(v)));
            }
            let inst_dv = propagate_dv(ax.dv(), subst);
            let mut hyps: Vec<Metaformula> = ax.hyps().iter().map(|h| subst.apply(h)).collect();
            let mut concl = subst.apply(ax.concl());
            if let Some(spec) = axioms.transform_marker() {
                // Legitimacy of the transform on the proof.
                let (a, b) = (Metavariable::var(spec.i), Metavariable::var(spec.j));
                if spec.i != spec.j && dv.contains(a, b) {
                    let pair = if a < b { (a, b) } else { (b, a) };
                    let e = TransformError::IllegitimateTransform { spec, pair };
                    return Err(err(k, KernelErrorKind::IllegitimateTransform(e)));
                }
                hyps = hyps.iter().map(|h| transform(spec, h)).collect();
                concl = transform(spec, &concl);
            }
            for (pi, want) in premises.iter().zip(&hyps) {
                let found = &p.lines[*pi].statement;
                if found != want {
                    return Err(err(
                        k,
                        KernelErrorKind::PremiseMismatch {
                            premise: pi + 1,
                            expected: want.clone(),
                            found: found.clone(),
                        },
                    ));
                }
            }
            if concl != line.statement {
                return Err(err(
                    k,
                    KernelErrorKind::LineMismatch { expected: concl, found: line.statement.clone() },
                ));
            }
            // Pairs on metavariables that vanish under a transform are dropped.
            let mut oc = BTreeSet::new();
            concl.collect_occurring(&mut oc);
            for h in &hyps {
                h.collect_occurring(&mut oc);
            }
            let required = inst_dv.restrict(&oc);
            if let Some(&pair) = required.iter().find(|(a, b)| !dv.contains(*a, *b)) {
                return Err(err(k, KernelErrorKind::DvViolation(pair)));
            }
            Ok(())
        }
    }
}

/// Largest index `j` of the given kind with `σ(m_j) ≠ m_j` or `m_j` in the
/// image of a moved metavariable.
fn footnote_bound(sigma: &Substitution, kind: MvKind) -> Option<u32> {
    let mut n: Option<u32> = None;
    let mut bump = |m: Metavariable| {
        if m.kind == kind {
            n = Some(n.map_or(m.index, |v| v.max(m.index)));
        }
    };
    for m in sigma.support() {
        bump(m);
        for o in sigma.image_oc(m) {
            bump(o);
        }
    }
    n
}

/// Dummy renaming `m_i ↦ m_{i+N+1}`, per kind. Falls back to the largest
/// index of the kind among non-dummies when the plain rule would collide.
pub fn dummy_renaming(p: &ProofScript, sigma: &Substitution) -> Substitution {
    let dummies = p.dummies();
    let fixed: BTreeSet<Metavariable> = p.target.occurring();
    let mut out = Substitution::identity();
    for kind in [MvKind::Var, MvKind::Formula] {
        let Some(mut n) = footnote_bound(sigma, kind) else { continue };
        let ds: Vec<Metavariable> = dummies.iter().copied().filter(|m| m.kind == kind).collect();
        let collides = |n: u32| {
            ds.iter().any(|d| {
                let r = Metavariable { kind, index: d.index + n + 1 };
                fixed.contains(&r)
            })
        };
        if collides(n) {
            n = fixed.iter().filter(|m| m.kind == kind).map(|m| m.index).max().unwrap_or(n).max(n);
        }
        for d in ds {
            if kind == MvKind::Var {
                out.vr.insert(d.index, d.index + n + 1);
            } else {
                out.fm.insert(d.index, Metaformula::Fm(d.index + n + 1));
            }
        }
    }
    out
}

/// `P^σ`: dummies renamed, σ applied linewise. Justifications become
/// `τ ; ρ ; σ`, so the result is checked against the same axiom set.
pub fn subst_proof(sigma: &Substitution, p: &ProofScript) -> Result<ProofScript, SchemeError> {
    check_legitimate(sigma, &p.target).map_err(SchemeError::IllegitimateSubstitution)?;
    let rho = dummy_renaming(p, sigma);
    let full = rho.then(sigma);
    let target = Scheme::new(
        p.target.hyps().iter().map(|h| sigma.apply(h)).collect(),
        sigma.apply(p.target.concl()),
        propagate_dv(p.target.dv(), sigma),
    );
    let lines = p
        .lines
        .iter()
        .map(|l| ProofLine {
            statement: full.apply(&l.statement),
            justification: match &l.justification {
                Justification::Hyp(h) => Justification::Hyp(*h),
                Justification::ByAxiom { label, subst, premises } => Justification::ByAxiom {
                    label: label.clone(),
                    subst: subst.then(&full),
                    premises: premises.clone(),
                },
            },
        })
        .collect();
    Ok(ProofScript { name: p.name.clone(), target, hyp_names: p.hyp_names.clone(), lines })
}

/// `P^{(i,j)}`: lines and target transformed, justifications kept; the
/// result is checked against `axioms.transformed(spec)`.
pub fn transform_proof(spec: TransformSpec, p: &ProofScript) -> Result<ProofScript, TransformError> {
    if spec.symmetric {
        let (a, b) = (spec.i.min(spec.j), spec.i.max(spec.j));
        let first = transform_proof(TransformSpec::directed(a, b), p)?;
        return transform_proof(TransformSpec::directed(b, a), &first);
    }
    let (a, b) = (Metavariable::var(spec.i), Metavariable::var(spec.j));
    if spec.i != spec.j && proof_dv(p).contains(a, b) {
        let pair = if a < b { (a, b) } else { (b, a) };
        return Err(TransformError::IllegitimateTransform { spec, pair });
    }
    let target = transform_scheme(spec, &p.target)?;
    let lines = p
        .lines
        .iter()
        .map(|l| ProofLine { statement: transform(spec, &l.statement), justification: l.justification.clone() })
        .collect();
    Ok(ProofScript { name: p.name.clone(), target, hyp_names: p.hyp_names.clone(), lines })
}

/// Whether σ is legitimate on the whole proof, i.e. on `DV(P)`.
pub fn legitimate_on_proof(sigma: &Substitution, p: &ProofScript) -> bool {
    dv_violation(&proof_dv(p), sigma).is_none()
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.target.render_block(&self.name))?;
        for (k, l) in self.lines.iter().enumerate() {
            match &l.justification {
                Justification::Hyp(h) => {
                    let name = self.hyp_names.get(*h).cloned().unwrap_or_else(|| format!("h{}", h + 1));
                    writeln!(f, "  {}: {} hyp {}", k + 1, l.statement, name)?
                }
                Justification::ByAxiom { label, subst, premises } => {
                    write!(f, "  {}: {} by {} {}", k + 1, l.statement, label, subst.render())?;
                    if !premises.is_empty() {
                        let ps: Vec<String> = premises.iter().map(|i| (i + 1).to_string()).collect();
                        write!(f, " from {}", ps.join(","))?;
                    }
                    writeln!(f)?
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::formula;
    use crate::syntax::Mf;

    fn eqrefl_gen() -> ProofScript {
        ProofScript::new(
            "allrefl",
            Scheme::axiom(formula("A. x0 x0 = x0")),
            vec![
                ProofLine::by(formula("x0 = x0"), "EQrefl", Substitution::identity(), &[]),
                ProofLine::by(formula("A. x0 x0 = x0"), "gen", Substitution::identity().formula(0, formula("x0 = x0")), &[0]),
            ],
        )
    }

    fn gen_rule_proof() -> ProofScript {
        // ({f0}, ∀x2 f0) by gen.
        ProofScript::new(
            "genx2",
            Scheme::new(vec![formula("f0")], formula("A. x2 f0"), DvSet::new()),
            vec![
                ProofLine::hyp(formula("f0"), 0),
                ProofLine::by(formula("A. x2 f0"), "gen", Substitution::identity().var(0, 2), &[0]),
            ],
        )
    }

    fn ax() -> AxiomSet {
        AxiomSet::from_labels(["gen", "EQrefl", "mp", "vacGen"]).unwrap()
    }

    #[test]
    fn two_line_fixture() {
        assert_eq!(verify_proof(&eqrefl_gen(), &ax()), Ok(()));
    }

    #[test]
    fn premise_order() {
        let mut p = eqrefl_gen();
        p.lines[1].justification = Justification::ByAxiom {
            label: "gen".into(),
            subst: Substitution::identity().formula(0, formula("x0 = x0")),
            premises: vec![1],
        };
        let e = verify_proof(&p, &ax()).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, KernelErrorKind::PremiseOutOfOrder { .. }));
    }

    #[test]
    fn unknown_axiom_and_mismatch() {
        let mut p = eqrefl_gen();
        if let Justification::ByAxiom { label, .. } = &mut p.lines[0].justification {
            *label = "nope".into();
        }
        assert!(matches!(verify_proof(&p, &ax()).unwrap_err().kind, KernelErrorKind::UnknownAxiom(_)));
        let mut p = eqrefl_gen();
        p.lines[0].statement = formula("x0 = x1");
        assert!(verify_proof(&p, &ax()).is_err());
    }

    #[test]
    fn wrong_conclusion() {
        let mut p = eqrefl_gen();
        p.lines.pop();
        p.target = Scheme::axiom(formula("A. x0 x0 = x0"));
        assert!(matches!(verify_proof(&p, &ax()).unwrap_err().kind, KernelErrorKind::WrongConclusion { .. }));
    }

    #[test]
    fn dv_of_proof() {
        let mut p = eqrefl_gen();
        assert_eq!(proof_dv(&p), DvSet::new());
        p.target = Scheme::axiom(formula("A. x0 f0"));
        p.lines.push(ProofLine::by(formula("x5 = x5"), "EQrefl", Substitution::identity().var(0, 5), &[]));
        p.lines.push(ProofLine::by(formula("x6 = x6"), "EQrefl", Substitution::identity().var(0, 6), &[]));
        let dv = proof_dv(&p);
        let (x0, x5, x6, f0) = (Metavariable::var(0), Metavariable::var(5), Metavariable::var(6), Metavariable::fm(0));
        assert!(dv.contains(x5, x0) && dv.contains(x5, f0) && dv.contains(x5, x6));
        assert!(!dv.contains(x0, f0));
        assert_eq!(dv.restrict(&p.target.occurring()), *p.target.dv());
    }

    #[test]
    fn dv_required() {
        // vacGen instance needs DV(x0, f1); only a dummy gets it for free.
        let target = Scheme::axiom(formula("( f1 -> A. x0 f1 )"));
        let line = ProofLine::by(
            formula("( f1 -> A. x0 f1 )"),
            "vacGen",
            Substitution::identity().formula(0, Mf::fm(1)),
            &[],
        );
        let p = ProofScript::new("v", target.clone(), vec![line.clone()]);
        assert!(matches!(verify_proof(&p, &ax()).unwrap_err().kind, KernelErrorKind::DvViolation(_)));
        let mut dv = DvSet::new();
        dv.insert(Metavariable::var(0), Metavariable::fm(1));
        let p = ProofScript::new("v", target.with_dv(dv), vec![line]);
        assert_eq!(verify_proof(&p, &ax()), Ok(()));
    }

    #[test]
    fn footnote_renaming() {
        // Dummy x5 with σ = {x0 ← x5}: N = 5, so x5 becomes x11.
        let mut p = eqrefl_gen();
        p.lines.insert(0, ProofLine::by(formula("x5 = x5"), "EQrefl", Substitution::identity().var(0, 5), &[]));
        p.lines[2].justification = Justification::ByAxiom {
            label: "gen".into(),
            subst: Substitution::identity().formula(0, formula("x0 = x0")),
            premises: vec![1],
        };
        assert_eq!(verify_proof(&p, &ax()), Ok(()));
        let sigma = Substitution::identity().var(0, 5);
        let rho = dummy_renaming(&p, &sigma);
        assert_eq!(rho.var_image(5), 11);
        let q = subst_proof(&sigma, &p).unwrap();
        assert_eq!(q.lines[0].statement, formula("x11 = x11"));
        assert_eq!(q.target.concl(), &formula("A. x5 x5 = x5"));
        assert_eq!(verify_proof(&q, &ax()), Ok(()));
    }

    #[test]
    fn identity_subst_is_identity() {
        let p = eqrefl_gen();
        let q = subst_proof(&Substitution::identity(), &p).unwrap();
        assert_eq!(q.target, p.target);
        assert_eq!(q.lines.iter().map(|l| &l.statement).collect::<Vec<_>>(), p.lines.iter().map(|l| &l.statement).collect::<Vec<_>>());
        assert_eq!(verify_proof(&q, &ax()), Ok(()));
    }

    #[test]
    fn substituted_gen_rule() {
        let p = gen_rule_proof();
        assert_eq!(verify_proof(&p, &ax()), Ok(()));
        let sigma = Substitution::identity().formula(0, formula("x0 = x1"));
        let q = subst_proof(&sigma, &p).unwrap();
        assert_eq!(q.target.concl(), &formula("A. x2 x0 = x1"));
        assert_eq!(verify_proof(&q, &ax()), Ok(()));
    }

    #[test]
    fn transformed_proofs() {
        let p = eqrefl_gen();
        let q = transform_proof(TransformSpec::directed(0, 1), &p).unwrap();
        assert_eq!(q.target, p.target);
        assert_eq!(verify_proof(&q, &ax().transformed(TransformSpec::directed(0, 1))), Ok(()));
        let q = transform_proof(TransformSpec::directed(0, 0), &p).unwrap();
        assert_eq!(q, p);
        // Transforming a gen instance whose formula image mentions both indices.
        let mut g = gen_rule_proof();
        g = subst_proof(&Substitution::identity().formula(0, formula("x1 = x2")), &g).unwrap();
        let spec = TransformSpec::directed(2, 1);
        let q = transform_proof(spec, &g).unwrap();
        assert_eq!(q.target.concl(), &formula("A. x2 x2 = x2"));
        assert_eq!(q.target.hyps(), &[formula("x1 = x2")]);
        assert_eq!(verify_proof(&q, &ax().transformed(spec)), Ok(()));
        // The untransformed set rejects it.
        assert!(verify_proof(&q, &ax()).is_err());
    }

    #[test]
    fn illegitimate_transform() {
        let mut dv = DvSet::new();
        dv.insert(Metavariable::var(0), Metavariable::var(1));
        let mut p = eqrefl_gen();
        p.target = Scheme::new(vec![], formula("A. x0 x0 = x0"), dv);
        p.lines.insert(0, ProofLine::by(formula("x1 = x1"), "EQrefl", Substitution::identity().var(0, 1), &[]));
        for l in &mut p.lines[1..] {
            if let Justification::ByAxiom { premises, .. } = &mut l.justification {
                for q in premises {
                    *q += 1;
                }
            }
        }
        // x1 is a dummy, hence DV with x0.
        assert!(transform_proof(TransformSpec::directed(0, 1), &p).is_err());
    }
}
