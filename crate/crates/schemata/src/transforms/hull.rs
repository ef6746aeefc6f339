//! Bounded exploration of the hull of a scheme set: closure under
//! legitimate transforms and a fixed grammar of instantiations.
//!
//! The grammar renames one variable metavariable, plugs an atom or another
//! formula metavariable, or wraps a formula metavariable in one connective.
//! The real hull is infinite; this only explores a prefix of it.

use std::collections::HashSet;
use std::fmt;

use crate::schemes::{check_legitimate, instantiate, DvSet, Scheme, Substitution};
use crate::syntax::Metaformula;

use super::{check_transform, is_trivial_on, transform_scheme, TransformSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Seed,
    Transform(TransformSpec),
    Instance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullReport {
    pub schemes: Vec<(Scheme, Origin)>,
    pub rounds: usize,
    /// The size bound cut the exploration short.
    pub truncated: bool,
}

impl HullReport {
    pub fn contains(&self, s: &Scheme) -> bool {
        self.schemes.iter().any(|(t, _)| t == s)
    }

    pub fn from_transforms(&self) -> usize {
        self.schemes.iter().filter(|(_, o)| matches!(o, Origin::Transform(_))).count()
    }
}

impl fmt::Display for HullReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} schemes after {} rounds ({} by transform){}",
            self.schemes.len(),
            self.rounds,
            self.from_transforms(),
            if self.truncated { ", truncated" } else { "" }
        )
    }
}

fn vars_of(s: &Scheme) -> Vec<u32> {
    s.occurring().into_iter().filter(|m| m.is_var()).map(|m| m.index).collect()
}

fn fms_of(s: &Scheme) -> Vec<u32> {
    s.occurring().into_iter().filter(|m| !m.is_var()).map(|m| m.index).collect()
}

/// Occurring variable indices plus one fresh index.
fn var_choices(s: &Scheme) -> Vec<u32> {
    let mut v = vars_of(s);
    v.push(v.iter().max().map_or(0, |m| m + 1));
    v
}

fn successors(s: &Scheme) -> Vec<(Scheme, Origin)> {
    let mut out = Vec::new();
    let vc = var_choices(s);
    for &i in &vc {
        for &j in &vc {
            let spec = TransformSpec::directed(i, j);
            if i == j || check_transform(spec, s).is_err() || is_trivial_on(spec, s) {
                continue;
            }
            out.push((transform_scheme(spec, s).expect("checked"), Origin::Transform(spec)));
        }
    }
    let mut sigmas = Vec::new();
    for &a in &vars_of(s) {
        for &b in &vc {
            if a != b {
                sigmas.push(Substitution::identity().var(a, b));
            }
        }
    }
    let fms = fms_of(s);
    let fresh = fms.iter().max().map_or(0, |m| m + 1);
    for &k in &fms {
        let fk = Metaformula::fm(k);
        for &a in &vc {
            for &b in &vc {
                sigmas.push(Substitution::identity().formula(k, Metaformula::eq(a, b)));
            }
            sigmas.push(Substitution::identity().formula(k, Metaformula::all(a, fk.clone())));
        }
        for &m in &fms {
            if m != k {
                sigmas.push(Substitution::identity().formula(k, Metaformula::fm(m)));
            }
        }
        sigmas.push(Substitution::identity().formula(k, Metaformula::not(fk.clone())));
        sigmas.push(Substitution::identity().formula(k, Metaformula::imp(fk.clone(), Metaformula::fm(fresh))));
        sigmas.push(Substitution::identity().formula(k, Metaformula::imp(Metaformula::fm(fresh), fk)));
    }
    for sigma in sigmas {
        if check_legitimate(&sigma, s).is_ok() {
            out.push((instantiate(&sigma, s, &DvSet::new()).expect("legitimate"), Origin::Instance));
        }
    }
    out
}

/// Explores the hull of `seeds` for `depth` rounds, keeping at most
/// `size_bound` schemes.
pub fn hull_closure(seeds: &[Scheme], depth: usize, size_bound: usize) -> HullReport {
    let mut seen: HashSet<Scheme> = HashSet::new();
    let mut schemes = Vec::new();
    let mut truncated = false;
    for s in seeds {
        if seen.insert(s.clone()) {
            schemes.push((s.clone(), Origin::Seed));
        }
    }
    let mut frontier: Vec<Scheme> = schemes.iter().map(|(s, _)| s.clone()).collect();
    let mut rounds = 0;
    'outer: while rounds < depth && !frontier.is_empty() {
        rounds += 1;
        let mut next = Vec::new();
        for s in &frontier {
            for (t, origin) in successors(s) {
                if seen.contains(&t) {
                    continue;
                }
                if schemes.len() >= size_bound {
                    truncated = true;
                    break 'outer;
                }
                seen.insert(t.clone());
                next.push(t.clone());
                schemes.push((t, origin));
            }
        }
        frontier = next;
    }
    HullReport { schemes, rounds, truncated }
}
