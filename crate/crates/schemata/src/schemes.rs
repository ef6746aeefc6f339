//! Schemes with disjoint-variable (DV) conditions, plain substitution,
//! DV propagation, legitimacy, instantiation and one-way instance matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Metaformula, Metavariable, Mf};

/// An unordered pair of distinct metavariables, stored smaller-first.
pub type DvPair = (Metavariable, Metavariable);

pub fn dv_pair(a: Metavariable, b: Metavariable) -> Option<DvPair> {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((a, b)),
        std::cmp::Ordering::Greater => Some((b, a)),
        std::cmp::Ordering::Equal => None,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DvSet {
    pairs: BTreeSet<DvPair>,
}

impl DvSet {
    pub fn new() -> Self {
        DvSet::default()
    }

    /// Inserts `{a,b}`; self-pairs are ignored.
    pub fn insert(&mut self, a: Metavariable, b: Metavariable) -> bool {
        match dv_pair(a, b) {
            Some(p) => self.pairs.insert(p),
            None => false,
        }
    }

    /// All pairs among the listed metavariables (Metamath `$d` convention).
    pub fn insert_group(&mut self, group: &[Metavariable]) {
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                self.insert(a, b);
            }
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Metavariable, Metavariable)>>(it: I) -> Self {
        let mut d = DvSet::new();
        for (a, b) in it {
            d.insert(a, b);
        }
        d
    }

    pub fn contains(&self, a: Metavariable, b: Metavariable) -> bool {
        dv_pair(a, b).is_some_and(|p| self.pairs.contains(&p))
    }

    pub fn iter(&self) -> impl Iterator<Item = &DvPair> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn union(&self, other: &DvSet) -> DvSet {
        DvSet { pairs: self.pairs.union(&other.pairs).copied().collect() }
    }

    pub fn is_subset(&self, other: &DvSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Keeps only pairs whose members both lie in `oc`.
    pub fn restrict(&self, oc: &BTreeSet<Metavariable>) -> DvSet {
        DvSet {
            pairs: self
                .pairs
                .iter()
                .filter(|(a, b)| oc.contains(a) && oc.contains(b))
                .copied()
                .collect(),
        }
    }

    pub fn difference(&self, other: &DvSet) -> DvSet {
        DvSet { pairs: self.pairs.difference(&other.pairs).copied().collect() }
    }

    pub fn retain<F: FnMut(&DvPair) -> bool>(&mut self, f: F) {
        self.pairs.retain(f);
    }

    /// Every pair among all members of `oc`.
    pub fn complete(oc: &BTreeSet<Metavariable>) -> DvSet {
        let v: Vec<_> = oc.iter().copied().collect();
        let mut d = DvSet::new();
        d.insert_group(&v);
        d
    }
}

impl fmt::Display for DvSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("DV({},{})", a, b)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `(hypotheses, conclusion, DV)`; DV is normalized to occurring metavariables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scheme {
    hyps: Vec<Metaformula>,
    concl: Metaformula,
    dv: DvSet,
}

impl Scheme {
    pub fn new(hyps: Vec<Metaformula>, concl: Metaformula, dv: DvSet) -> Self {
        let mut s = Scheme { hyps, concl, dv: DvSet::new() };
        s.dv = dv.restrict(&s.occurring());
        s
    }

    pub fn axiom(concl: Metaformula) -> Self {
        Scheme::new(vec![], concl, DvSet::new())
    }

    pub fn hyps(&self) -> &[Metaformula] {
        &self.hyps
    }

    pub fn concl(&self) -> &Metaformula {
        &self.concl
    }

    pub fn dv(&self) -> &DvSet {
        &self.dv
    }

    pub fn with_dv(&self, dv: DvSet) -> Scheme {
        Scheme::new(self.hyps.clone(), self.concl.clone(), dv)
    }

    pub fn occurring(&self) -> BTreeSet<Metavariable> {
        let mut out = BTreeSet::new();
        for h in &self.hyps {
            h.collect_occurring(&mut out);
        }
        self.concl.collect_occurring(&mut out);
        out
    }

    pub fn has_formula_mv(&self) -> bool {
        self.hyps.iter().any(Mf::has_formula_mv) || self.concl.has_formula_mv()
    }

    pub fn has_predicate(&self) -> bool {
        self.hyps.iter().any(Mf::has_predicate) || self.concl.has_predicate()
    }

    pub fn has_quantifier(&self) -> bool {
        self.hyps.iter().any(Mf::has_quantifier) || self.concl.has_quantifier()
    }

    /// All metaformulas of the scheme, hypotheses first.
    pub fn formulas(&self) -> impl Iterator<Item = &Metaformula> {
        self.hyps.iter().chain(std::iter::once(&self.concl))
    }

    /// Each `dv:` group rendered as a pair; the script form.
    pub fn render_block(&self, name: &str) -> String {
        let mut parts = Vec::new();
        for (a, b) in self.dv.iter() {
            parts.push(format!("dv: {} {}", a, b));
        }
        for (i, h) in self.hyps.iter().enumerate() {
            parts.push(format!("hyp h{}: {}", i + 1, h));
        }
        parts.push(format!("concl: {}", self.concl));
        format!("scheme {} {{ {} }}", name, parts.join(" ; "))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{}", h)?;
        }
        if !self.hyps.is_empty() {
            write!(f, " => ")?;
        }
        write!(f, "{}", self.concl)?;
        if !self.dv.is_empty() {
            write!(f, " , {}", self.dv)?;
        }
        Ok(())
    }
}

/// Finite-support, type-preserving substitution; identity off its support.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    pub vr: BTreeMap<u32, u32>,
    pub fm: BTreeMap<u32, Metaformula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn var(mut self, from: u32, to: u32) -> Self {
        self.vr.insert(from, to);
        self
    }

    pub fn formula(mut self, from: u32, to: Metaformula) -> Self {
        self.fm.insert(from, to);
        self
    }

    pub fn var_image(&self, i: u32) -> u32 {
        self.vr.get(&i).copied().unwrap_or(i)
    }

    pub fn fm_image(&self, i: u32) -> Metaformula {
        self.fm.get(&i).cloned().unwrap_or(Mf::Fm(i))
    }

    /// `OC(σ(m))`.
    pub fn image_oc(&self, m: Metavariable) -> BTreeSet<Metavariable> {
        if m.is_var() {
            [Metavariable::var(self.var_image(m.index))].into_iter().collect()
        } else {
            match self.fm.get(&m.index) {
                Some(f) => f.occurring(),
                None => [m].into_iter().collect(),
            }
        }
    }

    /// Whether `σ(m) ≠ m`.
    pub fn moves(&self, m: Metavariable) -> bool {
        if m.is_var() {
            self.var_image(m.index) != m.index
        } else {
            self.fm.get(&m.index).is_some_and(|f| *f != Mf::Fm(m.index))
        }
    }

    /// Metavariables moved by σ.
    pub fn support(&self) -> BTreeSet<Metavariable> {
        let mut out = BTreeSet::new();
        for (&k, &v) in &self.vr {
            if k != v {
                out.insert(Metavariable::var(k));
            }
        }
        for (k, v) in &self.fm {
            if *v != Mf::Fm(*k) {
                out.insert(Metavariable::fm(*k));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.support().is_empty()
    }

    /// Drops identity bindings.
    pub fn normalized(&self) -> Substitution {
        Substitution {
            vr: self.vr.iter().filter(|(k, v)| k != v).map(|(k, v)| (*k, *v)).collect(),
            fm: self
                .fm
                .iter()
                .filter(|(k, v)| **v != Mf::Fm(**k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn apply(&self, m: &Metaformula) -> Metaformula {
        match m {
            Mf::Fm(i) => self.fm_image(*i),
            Mf::Equals(a, b) => Mf::Equals(self.var_image(*a), self.var_image(*b)),
            Mf::Pred(n, args) => Mf::Pred(n.clone(), args.iter().map(|&a| self.var_image(a)).collect()),
            Mf::Not(a) => Mf::not(self.apply(a)),
            Mf::Implies(a, b) => Mf::imp(self.apply(a), self.apply(b)),
            Mf::Forall(x, a) => Mf::all(self.var_image(*x), self.apply(a)),
        }
    }

    /// `m ↦ outer(self(m))`, i.e. apply `self` first.
    pub fn then(&self, outer: &Substitution) -> Substitution {
        let mut out = Substitution::identity();
        for (&k, &v) in &self.vr {
            out.vr.insert(k, outer.var_image(v));
        }
        for (k, v) in &self.fm {
            out.fm.insert(*k, outer.apply(v));
        }
        for (&k, &v) in &outer.vr {
            out.vr.entry(k).or_insert(v);
        }
        for (k, v) in &outer.fm {
            out.fm.entry(*k).or_insert_with(|| v.clone());
        }
        out.normalized()
    }

    /// Restricts the support to the given metavariables.
    pub fn restricted(&self, keep: &BTreeSet<Metavariable>) -> Substitution {
        Substitution {
            vr: self
                .vr
                .iter()
                .filter(|(k, _)| keep.contains(&Metavariable::var(**k)))
                .map(|(k, v)| (*k, *v))
                .collect(),
            fm: self
                .fm
                .iter()
                .filter(|(k, _)| keep.contains(&Metavariable::fm(**k)))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
        .normalized()
    }

    /// Script form: `( f0 := FMLA ; x0 := x1 )`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, v) in &self.fm {
            parts.push(format!("f{} := {}", k, v));
        }
        for (k, v) in &self.vr {
            parts.push(format!("x{} := x{}", k, v));
        }
        format!("( {} )", parts.join(" ; "))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Violated DV pair and a metavariable shared by the two images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvViolation {
    pub pair: DvPair,
    pub shared: Metavariable,
}

impl fmt::Display for DvViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DV({},{}) violated: both images contain {}", self.pair.0, self.pair.1, self.shared)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("illegitimate substitution: {0}")]
    IllegitimateSubstitution(DvViolation),
}

/// `D^σ`: `{m,n}` with `m ∈ OC(σm')`, `n ∈ OC(σn')` for some `{m',n'} ∈ D`.
pub fn propagate_dv(d: &DvSet, sigma: &Substitution) -> DvSet {
    let mut out = DvSet::new();
    for &(a, b) in d.iter() {
        let ia = sigma.image_oc(a);
        let ib = sigma.image_oc(b);
        for &m in &ia {
            for &n in &ib {
                out.insert(m, n);
            }
        }
    }
    out
}

/// First DV pair of `dv` whose images share a metavariable.
pub fn dv_violation(dv: &DvSet, sigma: &Substitution) -> Option<DvViolation> {
    for &(a, b) in dv.iter() {
        let ia = sigma.image_oc(a);
        let ib = sigma.image_oc(b);
        if let Some(&shared) = ia.intersection(&ib).next() {
            return Some(DvViolation { pair: (a, b), shared });
        }
    }
    None
}

pub fn check_legitimate(sigma: &Substitution, phi: &Scheme) -> Result<(), DvViolation> {
    match dv_violation(phi.dv(), sigma) {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Applies σ to hypotheses and conclusion only; DV is propagated.
pub fn apply_scheme(sigma: &Substitution, phi: &Scheme) -> Scheme {
    Scheme::new(
        phi.hyps().iter().map(|h| sigma.apply(h)).collect(),
        sigma.apply(phi.concl()),
        propagate_dv(phi.dv(), sigma),
    )
}

pub fn instantiate(sigma: &Substitution, phi: &Scheme, extra_dv: &DvSet) -> Result<Scheme, SchemeError> {
    check_legitimate(sigma, phi).map_err(SchemeError::IllegitimateSubstitution)?;
    let base = apply_scheme(sigma, phi);
    let dv = base.dv().union(extra_dv);
    Ok(base.with_dv(dv))
}

/// One-way matching of `pat` against `target`, extending `sigma`.
pub fn match_formula(pat: &Metaformula, target: &Metaformula, sigma: &mut Substitution) -> bool {
    fn bind_var(sigma: &mut Substitution, from: u32, to: u32) -> bool {
        match sigma.vr.get(&from) {
            Some(&v) => v == to,
            None => {
                sigma.vr.insert(from, to);
                true
            }
        }
    }
    match (pat, target) {
        (Mf::Fm(i), t) => match sigma.fm.get(i) {
            Some(v) => v == t,
            None => {
                sigma.fm.insert(*i, t.clone());
                true
            }
        },
        (Mf::Equals(a, b), Mf::Equals(c, d)) => bind_var(sigma, *a, *c) && bind_var(sigma, *b, *d),
        (Mf::Pred(n, xs), Mf::Pred(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(&x, &y)| bind_var(sigma, x, y))
        }
        (Mf::Not(a), Mf::Not(b)) => match_formula(a, b, sigma),
        (Mf::Implies(a1, b1), Mf::Implies(a2, b2)) => {
            match_formula(a1, a2, sigma) && match_formula(b1, b2, sigma)
        }
        (Mf::Forall(x, a), Mf::Forall(y, b)) => bind_var(sigma, *x, *y) && match_formula(a, b, sigma),
        _ => false,
    }
}

/// Lexicographic permutations of `0..n`.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Returns a σ witnessing `psi ∈ Inst(phi)`, if any.
pub fn is_instance(psi: &Scheme, phi: &Scheme) -> Option<Substitution> {
    if psi.hyps().len() != phi.hyps().len() {
        return None;
    }
    let mut base = Substitution::identity();
    if !match_formula(phi.concl(), psi.concl(), &mut base) {
        return None;
    }
    for perm in permutations(phi.hyps().len()) {
        let mut sigma = base.clone();
        let ok = perm
            .iter()
            .enumerate()
            .all(|(i, &j)| match_formula(&phi.hyps()[i], &psi.hyps()[j], &mut sigma));
        if !ok {
            continue;
        }
        let sigma = sigma.normalized();
        if check_legitimate(&sigma, phi).is_err() {
            continue;
        }
        if propagate_dv(phi.dv(), &sigma).is_subset(psi.dv()) {
            return Some(sigma);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_metaformula, Language};

    fn p(s: &str) -> Metaformula {
        parse_metaformula(s, &Language::empty()).unwrap()
    }
    fn x(i: u32) -> Metavariable {
        Metavariable::var(i)
    }
    fn f(i: u32) -> Metavariable {
        Metavariable::fm(i)
    }

    fn spec() -> Scheme {
        Scheme::axiom(p("( A. x0 f0 -> f0 )"))
    }

    #[test]
    fn substitution_example() {
        let s = Substitution::identity().var(0, 1).formula(0, p("x0 = x2"));
        assert_eq!(s.apply(&p("A. x0 f0")), p("A. x1 x0 = x2"));
        assert_eq!(
            Substitution::identity().formula(0, p("-. f1")).apply(&p("( f0 -> f0 )")),
            p("( -. f1 -> -. f1 )")
        );
    }

    #[test]
    fn propagate_example() {
        let d = DvSet::from_pairs([(x(0), f(0))]);
        let s = Substitution::identity().formula(0, p("( x1 = x2 -> f1 )"));
        let want = DvSet::from_pairs([(x(0), x(1)), (x(0), x(2)), (x(0), f(1))]);
        assert_eq!(propagate_dv(&d, &s), want);
        assert!(propagate_dv(&DvSet::new(), &s).is_empty());
        let d2 = DvSet::from_pairs([(x(0), x(1))]);
        assert_eq!(propagate_dv(&d2, &Substitution::identity()), d2);
    }

    #[test]
    fn legitimacy_witness() {
        let vacgen = Scheme::new(vec![], p("( f0 -> A. x0 f0 )"), DvSet::from_pairs([(x(0), f(0))]));
        let s = Substitution::identity().formula(0, p("x0 = x1"));
        let v = check_legitimate(&s, &vacgen).unwrap_err();
        assert_eq!(v.pair, (x(0), f(0)));
        assert_eq!(v.shared, x(0));
        let denot = Scheme::new(
            vec![],
            p("( x0 = x0 -> -. A. x1 -. x1 = x0 )"),
            DvSet::from_pairs([(x(0), x(1))]),
        );
        assert!(check_legitimate(&Substitution::identity().var(1, 0), &denot).is_err());
        assert!(check_legitimate(&s, &spec()).is_ok());
    }

    #[test]
    fn instantiate_spec_and_allcomm() {
        let s = Substitution::identity().formula(0, p("x0 = x1"));
        let got = instantiate(&s, &spec(), &DvSet::new()).unwrap();
        assert_eq!(got, Scheme::axiom(p("( A. x0 x0 = x1 -> x0 = x1 )")));
        let allcomm = Scheme::axiom(p("( A. x0 A. x1 f0 -> A. x1 A. x0 f0 )"));
        let got = instantiate(&Substitution::identity().formula(0, p("x2 = x3")), &allcomm, &DvSet::new()).unwrap();
        assert_eq!(got.concl(), &p("( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )"));
        assert_eq!(instantiate(&Substitution::identity(), &allcomm, &DvSet::new()).unwrap(), allcomm);
    }

    #[test]
    fn instance_matching() {
        let psi = Scheme::axiom(p("( A. x0 x0 = x1 -> x0 = x1 )"));
        let s = is_instance(&psi, &spec()).unwrap();
        assert_eq!(s, Substitution::identity().formula(0, p("x0 = x1")));
        assert_eq!(is_instance(&spec(), &spec()), Some(Substitution::identity()));
        assert_eq!(is_instance(&Scheme::axiom(p("x0 = x0")), &spec()), None);
    }

    #[test]
    fn instance_requires_dv_inclusion() {
        let vacgen = Scheme::new(vec![], p("( f0 -> A. x0 f0 )"), DvSet::from_pairs([(x(0), f(0))]));
        let bare = Scheme::axiom(p("( x1 = x2 -> A. x0 x1 = x2 )"));
        assert!(is_instance(&bare, &vacgen).is_none());
        let with = bare.with_dv(DvSet::from_pairs([(x(0), x(1)), (x(0), x(2))]));
        assert!(is_instance(&with, &vacgen).is_some());
    }

    #[test]
    fn hypotheses_match_as_multiset() {
        let mp = Scheme::new(vec![p("f0"), p("( f0 -> f1 )")], p("f1"), DvSet::new());
        let inst = Scheme::new(vec![p("( x0 = x0 -> f3 )"), p("x0 = x0")], p("f3"), DvSet::new());
        assert!(is_instance(&inst, &mp).is_some());
    }

    #[test]
    fn restriction_at_construction() {
        let s = Scheme::new(vec![], p("f0"), DvSet::from_pairs([(x(0), f(0)), (x(1), x(2))]));
        assert!(s.dv().is_empty());
    }

    #[test]
    fn permutation_order() {
        assert_eq!(
            permutations(3),
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]
        );
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
