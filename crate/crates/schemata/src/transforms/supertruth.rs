//! Non-supertruth certificates and the quantifier-free supertruth decision.
//!
//! Supertruth quantifies over every instance and every transform, so only
//! its failure is certified: an instance, a legitimate transform, an
//! optional further instance, and a refutation of the result.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::objectlevel::{
    check_fo_witness, decide_eq_truth, fm_mvs, object_instantiate, set_partitions, var_mvs, FirstOrderModel, FoWitness,
    ObjectError, ObjectSubstitution,
};
use crate::schemes::{check_legitimate, instantiate, DvSet, Scheme, Substitution};
use crate::syntax::{Metaformula, Mf};

use super::{check_transform, is_trivial_on, transform_scheme, TransformSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Supertruth,
    /// Formula-metavariable-free instances and `{i,j}`-transforms only.
    Semisupertruth,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Supertruth => "supertrue",
            Mode::Semisupertruth => "semisupertrue",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refute {
    /// Decide the pure-equality result and expect `false`.
    EqDecide,
    /// An object instance false in a finite model at an assignment.
    Model { model: FirstOrderModel, tau: ObjectSubstitution, assignment: BTreeMap<u32, usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupertruthCertificate {
    pub name: String,
    pub target_label: String,
    pub target: Scheme,
    /// First-level instance σ of the target.
    pub instance: Substitution,
    pub transform: TransformSpec,
    /// Instance of the transformed conclusion, applied after the transform.
    pub then: Option<Substitution>,
    pub refute: Refute,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupertruthError {
    #[error("illegitimate step: {0}")]
    IllegitimateStep(String),
    #[error("refutation failed: {0}")]
    RefutationFailed(String),
    #[error("hypothesis not established: {0}")]
    HypothesisNotEstablished(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupertruthReport {
    pub name: String,
    pub mode: Mode,
    pub instance: Scheme,
    pub transformed: Scheme,
    pub refuted: Scheme,
    pub detail: String,
}

impl fmt::Display for SupertruthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate {}: not {}", self.name, self.mode)?;
        writeln!(f, "  instance    {}", self.instance.concl())?;
        writeln!(f, "  transformed {}", self.transformed.concl())?;
        if self.refuted != self.transformed {
            writeln!(f, "  instance    {}", self.refuted.concl())?;
        }
        write!(f, "  {}", self.detail)
    }
}

/// Checks that the certificate exhibits an instance whose hypotheses are
/// (semi)supertrue while a transform of its conclusion is not true.
pub fn verify_not_supertrue(c: &SupertruthCertificate, mode: Mode) -> Result<SupertruthReport, SupertruthError> {
    let bad = |m: String| SupertruthError::IllegitimateStep(m);
    let inst = instantiate(&c.instance, &c.target, &DvSet::new()).map_err(|e| bad(e.to_string()))?;
    if mode == Mode::Semisupertruth {
        if inst.has_formula_mv() {
            return Err(bad("semisupertruth concerns formula-metavariable-free instances".into()));
        }
        if !c.transform.symmetric {
            return Err(bad("semisupertruth uses {i,j}-transforms".into()));
        }
    }
    for h in inst.hyps() {
        let hs = Scheme::new(vec![], h.clone(), inst.dv().clone());
        match supertrue_quantifier_free(&hs) {
            Ok(true) => {}
            Ok(false) => return Err(SupertruthError::HypothesisNotEstablished(format!("`{}` is not true", h))),
            Err(e) => return Err(SupertruthError::HypothesisNotEstablished(format!("`{}`: {}", h, e))),
        }
    }
    let concl = Scheme::new(vec![], inst.concl().clone(), inst.dv().clone());
    check_transform(c.transform, &concl).map_err(|e| bad(e.to_string()))?;
    if is_trivial_on(c.transform, &concl) {
        return Err(bad(format!("transform {} is trivial on the instance", c.transform)));
    }
    let transformed = transform_scheme(c.transform, &concl).map_err(|e| bad(e.to_string()))?;
    let refuted = match &c.then {
        Some(theta) => {
            check_legitimate(theta, &transformed).map_err(|e| bad(e.to_string()))?;
            instantiate(theta, &transformed, &DvSet::new()).map_err(|e| bad(e.to_string()))?
        }
        None => transformed.clone(),
    };
    let detail = refute(&c.refute, &refuted)?;
    Ok(SupertruthReport { name: c.name.clone(), mode, instance: inst, transformed, refuted, detail })
}

fn refute(r: &Refute, s: &Scheme) -> Result<String, SupertruthError> {
    let failed = |m: String| SupertruthError::RefutationFailed(m);
    match r {
        Refute::EqDecide => {
            let d = decide_eq_truth(s).map_err(|e| failed(e.to_string()))?;
            if d.truth {
                return Err(failed(format!("`{}` is true", s.concl())));
            }
            let cex = d.counterexample.map(|c| c.to_string()).unwrap_or_default();
            Ok(format!("not true: {}", cex))
        }
        Refute::Model { model, tau, assignment } => {
            model.check().map_err(|e| failed(e.to_string()))?;
            let instance = object_instantiate(tau, s).map_err(|e| failed(e.to_string()))?;
            let w = FoWitness { tau: tau.clone(), instance: instance.clone(), assignment: assignment.clone() };
            if !check_fo_witness(model, s, &w) {
                return Err(failed(format!("`{}` is not refuted by the witness", instance)));
            }
            let asg: Vec<String> = assignment.iter().map(|(v, d)| format!("v{}={}", v, d)).collect();
            Ok(format!("not true: `{}` fails in the {}-element model at {}", instance, model.size, asg.join(" ")))
        }
    }
}

/// Truth of a quantifier-free pure-equality scheme, which then is supertrue.
///
/// Formula metavariables range over both truth values and variable
/// metavariables over every equality pattern of their values. DV pairs do
/// not restrict the patterns: distinct variables may denote one object.
pub fn supertrue_quantifier_free(phi: &Scheme) -> Result<bool, ObjectError> {
    let unsupported = |m: &str| Err(ObjectError::UnsupportedScheme(m.into()));
    if !phi.hyps().is_empty() {
        return unsupported("hypotheses present");
    }
    if phi.has_quantifier() {
        return unsupported("quantifier present");
    }
    if phi.has_predicate() {
        return unsupported("nonlogical predicate present");
    }
    let vars = var_mvs(phi);
    let fms = fm_mvs(phi);
    for part in set_partitions(vars.len()) {
        let block: BTreeMap<u32, usize> = vars.iter().copied().zip(part).collect();
        for bits in 0u64..(1 << fms.len()) {
            let val: BTreeMap<u32, bool> = fms.iter().enumerate().map(|(k, &f)| (f, bits >> k & 1 == 1)).collect();
            if !eval_qf(phi.concl(), &block, &val) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn eval_qf(m: &Metaformula, block: &BTreeMap<u32, usize>, val: &BTreeMap<u32, bool>) -> bool {
    match m {
        Mf::Fm(i) => val[i],
        Mf::Equals(a, b) => block[a] == block[b],
        Mf::Not(a) => !eval_qf(a, block, val),
        Mf::Implies(a, b) => !eval_qf(a, block, val) || eval_qf(b, block, val),
        Mf::Pred(..) | Mf::Forall(..) => unreachable!("rejected above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::{formula, get_system, scheme};
    use crate::syntax::Metavariable;

    fn allcomm_cert() -> SupertruthCertificate {
        SupertruthCertificate {
            name: "ALLcomm".into(),
            target_label: "ALLcomm".into(),
            target: scheme("ALLcomm").unwrap(),
            instance: Substitution::identity().formula(0, formula("x2 = x3")),
            transform: TransformSpec::directed(0, 1),
            then: Some(Substitution::identity().var(2, 1)),
            refute: Refute::EqDecide,
        }
    }

    #[test]
    fn allcomm_not_supertrue() {
        let r = verify_not_supertrue(&allcomm_cert(), Mode::Supertruth).unwrap();
        assert_eq!(r.transformed.concl(), &formula("( A. x0 A. x0 x2 = x3 -> A. x1 A. x0 x2 = x3 )"));
        assert_eq!(r.refuted.concl(), &formula("( A. x0 A. x0 x1 = x3 -> A. x1 A. x0 x1 = x3 )"));
        // The symmetric transform is refuted by sending x2 to the new binder.
        let mut c = allcomm_cert();
        c.transform = TransformSpec::sym(0, 1);
        c.then = None;
        let r = verify_not_supertrue(&c, Mode::Semisupertruth).unwrap();
        assert_eq!(r.transformed.concl(), &formula("( A. x0 A. x0 x2 = x3 -> A. x1 A. x1 x2 = x3 )"));
        // Once x and y stay out of phi it is only a bound-variable renaming.
        let phi = Metavariable::fm(0);
        c.target = c.target.with_dv(DvSet::from_pairs([(Metavariable::var(0), phi), (Metavariable::var(1), phi)]));
        let r = verify_not_supertrue(&c, Mode::Semisupertruth);
        assert!(matches!(r, Err(SupertruthError::RefutationFailed(_))), "{:?}", r);
    }

    #[test]
    fn weakened_allcomm_blocks_the_transform() {
        let mut c = allcomm_cert();
        let dv = DvSet::from_pairs([(Metavariable::var(0), Metavariable::var(1))]);
        c.target = c.target.with_dv(dv);
        assert!(matches!(verify_not_supertrue(&c, Mode::Supertruth), Err(SupertruthError::IllegitimateStep(_))));
    }

    #[test]
    fn spec_and_alleq_not_semisupertrue() {
        let spec = SupertruthCertificate {
            name: "spec".into(),
            target_label: "spec".into(),
            target: scheme("spec").unwrap(),
            instance: Substitution::identity().formula(0, formula("x0 = x1")),
            transform: TransformSpec::sym(0, 1),
            then: None,
            refute: Refute::EqDecide,
        };
        let r = verify_not_supertrue(&spec, Mode::Semisupertruth).unwrap();
        assert_eq!(r.transformed.concl(), &formula("( A. x0 x0 = x0 -> x0 = x1 )"));
        let alleq = SupertruthCertificate {
            name: "ALLeq".into(),
            target_label: "ALLeq".into(),
            target: scheme("ALLeq").unwrap(),
            instance: Substitution::identity().formula(0, formula("x2 = x3")),
            transform: TransformSpec::sym(0, 1),
            then: Some(Substitution::identity().var(2, 1)),
            refute: Refute::EqDecide,
        };
        let r = verify_not_supertrue(&alleq, Mode::Semisupertruth).unwrap();
        assert_eq!(r.transformed.concl(), &formula("( A. x0 x0 = x0 -> ( A. x0 x2 = x3 -> A. x1 x2 = x3 ) )"));
    }

    #[test]
    fn model_refutation() {
        let mut c = allcomm_cert();
        c.refute = Refute::Model {
            model: FirstOrderModel::standard(2),
            tau: ObjectSubstitution::new().var(0, 0).var(1, 1).var(3, 2),
            assignment: [(1, 0), (2, 0)].into_iter().collect(),
        };
        assert!(verify_not_supertrue(&c, Mode::Supertruth).is_ok(), "{:?}", verify_not_supertrue(&c, Mode::Supertruth));
        c.refute = Refute::Model {
            model: FirstOrderModel::standard(2),
            tau: ObjectSubstitution::new().var(0, 0).var(1, 1).var(3, 2),
            assignment: [(1, 0), (2, 1)].into_iter().collect(),
        };
        assert!(matches!(verify_not_supertrue(&c, Mode::Supertruth), Err(SupertruthError::RefutationFailed(_))));
    }

    #[test]
    fn rule_form_hypotheses() {
        // gen instantiated at x0 = x1 -> f0: the hypothesis is not true.
        let c = SupertruthCertificate {
            name: "gen".into(),
            target_label: "gen".into(),
            target: scheme("gen").unwrap(),
            instance: Substitution::identity().formula(0, formula("( x0 = x1 -> x0 = x1 )")),
            transform: TransformSpec::directed(0, 1),
            then: None,
            refute: Refute::EqDecide,
        };
        // The hypothesis holds, and so does the transformed conclusion.
        assert!(matches!(verify_not_supertrue(&c, Mode::Supertruth), Err(SupertruthError::RefutationFailed(_))));
        let mut c = c;
        c.instance = Substitution::identity().formula(0, formula("x0 = x1"));
        assert!(matches!(verify_not_supertrue(&c, Mode::Supertruth), Err(SupertruthError::HypothesisNotEstablished(_))));
    }

    #[test]
    fn quantifier_free_decision() {
        assert!(supertrue_quantifier_free(&scheme("EQtrans").unwrap()).unwrap());
        assert!(supertrue_quantifier_free(&scheme("peirce").unwrap()).unwrap());
        let dv = DvSet::from_pairs([(Metavariable::var(0), Metavariable::var(1))]);
        assert!(!supertrue_quantifier_free(&Scheme::new(vec![], formula("x0 = x1"), dv)).unwrap());
        assert!(supertrue_quantifier_free(&scheme("spec").unwrap()).is_err());
        for l in get_system("propcalc").unwrap().into_iter().filter(|l| l != "mp") {
            assert!(supertrue_quantifier_free(&scheme(&l).unwrap()).unwrap(), "{}", l);
        }
    }
}
