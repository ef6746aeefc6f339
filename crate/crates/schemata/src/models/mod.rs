//! Countermodels that are not first-order structures: many-valued truth
//! tables, the two-level generalization valuation, Kripke and neighborhood
//! models, anchored truth, and the certificates packaging them.

use std::fmt;

use thiserror::Error;

use crate::objectlevel::{FormulaWithHyps, ObjectSubstitution};

pub mod table;
pub mod genval;
pub mod modal;
pub mod star;
pub mod height;
pub mod search;
pub mod cert;

pub use cert::{check_certificate, resolve_label, CertError, CertReport, CertWitness, IndependenceCertificate, ModelSpec};
pub use genval::{gen_eval, gen_eval_i, GenValuation};
pub use modal::{KripkeModel, NeighborhoodModel};
pub use search::{search_truth_table, SearchError, SearchResult};
pub use star::StarTruthModel;
pub use table::{tt_eval, EqRule, QuantRule, TruthTableModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("predicate {0} has no value in this model")]
    UnvaluedPredicate(String),
    #[error("unsupported scheme: {0}")]
    Unsupported(String),
}

/// A refuted instance. `tau`/`instance` are present when the refuting
/// values are realized by object formulas; `detail` names the values,
/// world or assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub tau: Option<ObjectSubstitution>,
    pub instance: Option<FormulaWithHyps>,
    pub detail: String,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.tau, &self.instance) {
            (Some(t), Some(i)) => write!(f, "{} gives `{}`; {}", t, i, self.detail),
            _ => write!(f, "{} (not realized by object formulas)", self.detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Validated; the string states whether this is exact or bounded.
    Validated(String),
    Falsified(Refutation),
    Unresolved(String),
}

impl Verdict {
    pub fn is_validated(&self) -> bool {
        matches!(self, Verdict::Validated(_))
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Validated(b) => write!(f, "validated ({})", b),
            Verdict::Falsified(r) => write!(f, "falsified: {}", r),
            Verdict::Unresolved(r) => write!(f, "unresolved: {}", r),
        }
    }
}

/// Mixed-radix odometer; stops early when `f` returns false.
pub(crate) fn odometer(radices: &[usize], mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if radices.contains(&0) {
        return true;
    }
    let mut digits = vec![0usize; radices.len()];
    loop {
        if !f(&digits) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return true;
            }
            digits[k] += 1;
            if digits[k] < radices[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_counts() {
        let mut n = 0;
        odometer(&[2, 3], |_| {
            n += 1;
            true
        });
        assert_eq!(n, 6);
        let mut m = 0;
        odometer(&[], |_| {
            m += 1;
            true
        });
        assert_eq!(m, 1);
    }
}
