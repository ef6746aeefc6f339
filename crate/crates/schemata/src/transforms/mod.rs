//! Bound-variable-capturing transforms of schemes.
//!
//! The `(i,j)`-transform replaces every `x_j` that sits inside the scope of a
//! quantifier over `x_i` (binder positions included) by `x_i`. The symmetric
//! `{i,j}`-transform composes the two directed transforms, smaller index
//! first.

use std::fmt;

use thiserror::Error;

use crate::schemes::{DvPair, Scheme};
use crate::syntax::{Metaformula, Metavariable, Mf};

pub mod closure;
mod hull;
mod supertruth;

pub use hull::{hull_closure, HullReport, Origin};
pub use supertruth::{
    supertrue_quantifier_free, verify_not_supertrue, Mode, Refute, SupertruthCertificate, SupertruthError,
    SupertruthReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransformSpec {
    pub i: u32,
    pub j: u32,
    pub symmetric: bool,
}

impl TransformSpec {
    pub fn directed(i: u32, j: u32) -> Self {
        TransformSpec { i, j, symmetric: false }
    }

    pub fn sym(i: u32, j: u32) -> Self {
        TransformSpec { i, j, symmetric: true }
    }

    pub fn is_trivial_spec(&self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symmetric {
            write!(f, "{{{},{}}}", self.i, self.j)
        } else {
            write!(f, "({},{})", self.i, self.j)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("illegitimate transform {spec}: DV({}, {}) holds", .pair.0, .pair.1)]
    IllegitimateTransform { spec: TransformSpec, pair: DvPair },
}

fn directed(i: u32, j: u32, m: &Metaformula, inside: bool) -> Metaformula {
    let r = |v: u32| if inside && v == j { i } else { v };
    match m {
        Mf::Fm(_) => m.clone(),
        Mf::Equals(a, b) => Mf::Equals(r(*a), r(*b)),
        Mf::Pred(n, args) => Mf::Pred(n.clone(), args.iter().map(|&a| r(a)).collect()),
        Mf::Not(a) => Mf::not(directed(i, j, a, inside)),
        Mf::Implies(a, b) => Mf::imp(directed(i, j, a, inside), directed(i, j, b, inside)),
        Mf::Forall(x, a) => {
            let inner = inside || *x == i;
            Mf::all(r(*x), directed(i, j, a, inner))
        }
    }
}

/// Transform of a single metaformula; legitimacy is a scheme-level notion.
pub fn transform(spec: TransformSpec, m: &Metaformula) -> Metaformula {
    if spec.i == spec.j {
        return m.clone();
    }
    if spec.symmetric {
        let (a, b) = (spec.i.min(spec.j), spec.i.max(spec.j));
        let first = directed(a, b, m, false);
        directed(b, a, &first, false)
    } else {
        directed(spec.i, spec.j, m, false)
    }
}

/// `{x_i, x_j} ∉ DV`; `(i,i)` is always legitimate.
pub fn check_transform(spec: TransformSpec, phi: &Scheme) -> Result<(), TransformError> {
    let (a, b) = (Metavariable::var(spec.i), Metavariable::var(spec.j));
    if spec.i != spec.j && phi.dv().contains(a, b) {
        let pair = if a < b { (a, b) } else { (b, a) };
        return Err(TransformError::IllegitimateTransform { spec, pair });
    }
    Ok(())
}

/// Whether the transform is trivial on Φ, i.e. `x_i, x_j` do not both occur.
pub fn is_trivial_on(spec: TransformSpec, phi: &Scheme) -> bool {
    let oc = phi.occurring();
    spec.i == spec.j || !(oc.contains(&Metavariable::var(spec.i)) && oc.contains(&Metavariable::var(spec.j)))
}

/// Componentwise transform; DV kept, then restricted to what still occurs.
pub fn transform_scheme(spec: TransformSpec, phi: &Scheme) -> Result<Scheme, TransformError> {
    check_transform(spec, phi)?;
    Ok(Scheme::new(
        phi.hyps().iter().map(|h| transform(spec, h)).collect(),
        transform(spec, phi.concl()),
        phi.dv().clone(),
    ))
}

pub fn sym_transform(i: u32, j: u32, phi: &Scheme) -> Result<Scheme, TransformError> {
    transform_scheme(TransformSpec::sym(i, j), phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::{formula, scheme};
    use crate::schemes::Substitution;

    #[test]
    fn allcomm_directed() {
        let f = formula("( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )");
        let want = formula("( A. x0 A. x0 x2 = x3 -> A. x1 A. x0 x2 = x3 )");
        assert_eq!(transform(TransformSpec::directed(0, 1), &f), want);
    }

    #[test]
    fn spec_symmetric() {
        let s = Scheme::axiom(formula("( A. x0 x0 = x1 -> x0 = x1 )"));
        let t = sym_transform(0, 1, &s).unwrap();
        assert_eq!(t.concl(), &formula("( A. x0 x0 = x0 -> x0 = x1 )"));
    }

    #[test]
    fn allcomm_symmetric() {
        let s = Scheme::axiom(formula("( A. x0 A. x1 ( x0 = x2 -> x1 = x3 ) -> A. x1 A. x0 ( x0 = x2 -> x1 = x3 ) )"));
        let t = sym_transform(0, 1, &s).unwrap();
        let want = formula("( A. x0 A. x0 ( x0 = x2 -> x0 = x3 ) -> A. x1 A. x1 ( x1 = x2 -> x1 = x3 ) )");
        assert_eq!(t.concl(), &want);
    }

    #[test]
    fn denot_blocked() {
        let d = scheme("denot").unwrap();
        assert!(transform_scheme(TransformSpec::directed(0, 1), &d).is_err());
        assert!(transform_scheme(TransformSpec::directed(1, 0), &d).is_err());
        let free = d.with_dv(Default::default());
        let t = transform_scheme(TransformSpec::directed(1, 0), &free).unwrap();
        assert_eq!(t.concl(), &formula("( x0 = x0 -> -. A. x1 -. x1 = x1 )"));
        // The pair x = y collapses the other way too.
        let t = transform_scheme(TransformSpec::directed(0, 1), &free).unwrap();
        assert_eq!(t.concl(), d.concl());
    }

    #[test]
    fn quantified_transform_is_substitution() {
        let phi = formula("( x1 = x2 -> A. x1 ( f0 -> x0 = x1 ) )");
        let lhs = transform(TransformSpec::directed(0, 1), &Mf::all(0, phi.clone()));
        let rhs = Mf::all(0, Substitution::identity().var(1, 0).apply(&phi));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trivial_cases() {
        let a = scheme("ALLcomm").unwrap();
        assert_eq!(transform_scheme(TransformSpec::directed(0, 0), &a).unwrap(), a);
        let g = scheme("spec").unwrap();
        assert!(is_trivial_on(TransformSpec::directed(0, 1), &g));
        assert_eq!(transform_scheme(TransformSpec::directed(0, 1), &g).unwrap(), g);
    }
}
