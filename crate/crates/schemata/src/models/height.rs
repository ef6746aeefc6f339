//! Independence of detachment by shape: without it, every proof line of a
//! hypothesis-free theorem is the conclusion of an axiom instance, so a
//! formula no axiom conclusion matches is unprovable.

use std::fmt;

use crate::objectlevel::ObjectFormula;
use crate::schemes::{match_formula, Scheme, Substitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeRow {
    pub label: String,
    /// Least height of any instance of the conclusion.
    pub min_height: usize,
    /// The conclusion matches the target (DV conditions ignored).
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub target: ObjectFormula,
    pub rows: Vec<ShapeRow>,
}

impl ShapeReport {
    /// No axiom conclusion matches, so the target is unprovable.
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| !r.matches)
    }
}

impl fmt::Display for ShapeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target `{}` (height {})", self.target, self.target.height())?;
        for r in &self.rows {
            let why = if r.matches {
                "MATCHES"
            } else if r.min_height > self.target.height() {
                "too tall"
            } else {
                "shape differs"
            };
            writeln!(f, "  {:10} min height {:2}  {}", r.label, r.min_height, why)?;
        }
        Ok(())
    }
}

/// Compares `target` against the conclusion of every scheme in `axioms`.
/// The caller leaves out detachment itself.
pub fn shape_check(target: &ObjectFormula, axioms: &[(String, Scheme)]) -> ShapeReport {
    let rows = axioms
        .iter()
        .map(|(label, s)| {
            let mut sigma = Substitution::identity();
            ShapeRow {
                label: label.clone(),
                min_height: s.concl().height(),
                matches: match_formula(s.concl(), target.tree(), &mut sigma),
            }
        })
        .collect();
    ShapeReport { target: target.clone(), rows }
}

/// `¬v0≡v0 → ¬v0≡v0`: an instance of `φ → φ`, which needs detachment.
pub fn default_target() -> ObjectFormula {
    let a = ObjectFormula::not(ObjectFormula::eq(0, 0));
    ObjectFormula::imp(a.clone(), a)
}
