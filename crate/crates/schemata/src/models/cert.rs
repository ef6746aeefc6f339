//! Independence certificates: a model, the axioms it must validate, the
//! scheme it must refute and an explicit refuting instance.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::axiomdb;
use crate::objectlevel::{
    check_fo_witness, fo_validates_scheme, object_instantiate, FirstOrderModel, FoVerdict, FoWitness, ObjectFormula,
    ObjectSubstitution,
};
use crate::schemes::Scheme;
use crate::syntax::Language;

use super::genval::{gen_refutes, gen_validates, GenValuation};
use super::height::shape_check;
use super::modal::{kripke_validates, modal_refutes, neighborhood_validates, KripkeModel, ModalModel, NeighborhoodModel};
use super::table::{tt_refutes, tt_validates, TruthTableModel};
use super::{ModelError, Refutation, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Table(TruthTableModel),
    Gen(GenValuation),
    Kripke(KripkeModel),
    Neighborhood(NeighborhoodModel),
    FirstOrder { model: FirstOrderModel, surrogate_support: usize },
    /// Detachment: the target formula matches no axiom conclusion.
    Shape { target: ObjectFormula },
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Table(_) => "tt",
            ModelSpec::Gen(_) => "gen",
            ModelSpec::Kripke(_) => "kripke",
            ModelSpec::Neighborhood(_) => "neighborhood",
            ModelSpec::FirstOrder { .. } => "fo",
            ModelSpec::Shape { .. } => "shape",
        }
    }

    fn check(&self) -> Result<(), ModelError> {
        match self {
            ModelSpec::Table(t) => t.check(),
            ModelSpec::Kripke(k) => k.check(),
            ModelSpec::Neighborhood(n) => n.check(),
            ModelSpec::FirstOrder { model, .. } => model.check().map_err(|e| ModelError::Malformed(e.to_string())),
            ModelSpec::Gen(_) | ModelSpec::Shape { .. } => Ok(()),
        }
    }

    /// Validation verdict of one scheme in this model.
    pub fn validate(&self, phi: &Scheme) -> Verdict {
        match self {
            ModelSpec::Table(t) => tt_validates(t, phi),
            ModelSpec::Gen(g) => gen_validates(g, phi),
            ModelSpec::Kripke(k) => kripke_validates(k, phi),
            ModelSpec::Neighborhood(n) => neighborhood_validates(n, phi),
            ModelSpec::FirstOrder { model, surrogate_support } => match fo_validates_scheme(model, phi, *surrogate_support) {
                FoVerdict::Validated(b) => Verdict::Validated(format!("exact: {}", b)),
                FoVerdict::Falsified(w) => {
                    let asg: Vec<String> = w.assignment.iter().map(|(v, d)| format!("v{}={}", v, d)).collect();
                    Verdict::Falsified(Refutation {
                        tau: Some(w.tau),
                        instance: Some(w.instance),
                        detail: format!("false at {}", asg.join(" ")),
                    })
                }
                FoVerdict::Unresolved(r) => Verdict::Unresolved(r),
            },
            ModelSpec::Shape { target } => {
                let r = shape_check(target, &[("scheme".to_string(), phi.clone())]);
                if r.ok() {
                    Verdict::Validated(format!("conclusion never matches `{}`", target))
                } else {
                    Verdict::Unresolved(format!("conclusion matches `{}`", target))
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertWitness {
    pub tau: ObjectSubstitution,
    /// First-order models: the falsifying assignment.
    pub assignment: BTreeMap<u32, usize>,
    /// Modal models: the world where the conclusion fails.
    pub world: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub name: String,
    pub language: Language,
    pub validate: Vec<String>,
    /// Schemes outside the claim that the model also refutes, checked so
    /// the certificate states exactly what the model does.
    pub also_falsified: Vec<String>,
    pub target: String,
    /// Inline target scheme; when absent, `target` is a label.
    pub target_scheme: Option<Scheme>,
    pub model: ModelSpec,
    pub witness: Option<CertWitness>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("{0}")]
    MalformedModel(String),
    #[error("axiom {label} not validated: {detail}")]
    AxiomNotValidated { label: String, detail: String },
    #[error("scheme {0} listed as also falsified is not refuted")]
    NotFalsified(String),
    #[error("target not falsified: {0}")]
    TargetNotFalsified(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub name: String,
    pub model_kind: String,
    pub validated: Vec<(String, String)>,
    pub also_falsified: Vec<(String, String)>,
    pub target: String,
    pub refutation: String,
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate {} ({} model): OK", self.name, self.model_kind)?;
        for (l, b) in &self.validated {
            writeln!(f, "  validates {:10} {}", l, b)?;
        }
        for (l, d) in &self.also_falsified {
            writeln!(f, "  also refutes {:7} {}", l, d)?;
        }
        write!(f, "  refutes {} by {}", self.target, self.refutation)
    }
}

/// Catalog label, or a predicate axiom generated for `lang`.
pub fn resolve_label(label: &str, lang: &Language) -> Option<Scheme> {
    if let Ok(s) = axiomdb::scheme(label) {
        return Some(s);
    }
    axiomdb::predicate_axioms(lang, true).into_iter().find(|(l, _)| l == label).map(|(_, s)| s)
}

/// Checks every claim of the certificate; the witness is re-evaluated
/// directly rather than taken from a search.
pub fn check_certificate(c: &IndependenceCertificate) -> Result<CertReport, CertError> {
    c.model.check().map_err(|e| CertError::MalformedModel(e.to_string()))?;
    let target = match &c.target_scheme {
        Some(s) => s.clone(),
        None => resolve_label(&c.target, &c.language).ok_or_else(|| CertError::UnknownLabel(c.target.clone()))?,
    };
    let mut validated = Vec::new();
    for label in &c.validate {
        let s = resolve_label(label, &c.language).ok_or_else(|| CertError::UnknownLabel(label.clone()))?;
        match c.model.validate(&s) {
            Verdict::Validated(b) => validated.push((label.clone(), b)),
            other => {
                return Err(CertError::AxiomNotValidated { label: label.clone(), detail: other.to_string() });
            }
        }
    }
    let mut also = Vec::new();
    for label in &c.also_falsified {
        let s = resolve_label(label, &c.language).ok_or_else(|| CertError::UnknownLabel(label.clone()))?;
        match c.model.validate(&s) {
            Verdict::Falsified(r) => also.push((label.clone(), r.to_string())),
            _ => return Err(CertError::NotFalsified(label.clone())),
        }
    }
    let refutation = refute_target(c, &target)?;
    Ok(CertReport {
        name: c.name.clone(),
        model_kind: c.model.kind().to_string(),
        validated,
        also_falsified: also,
        target: c.target.clone(),
        refutation,
    })
}

fn refute_target(c: &IndependenceCertificate, target: &Scheme) -> Result<String, CertError> {
    let fail = |m: String| Err(CertError::TargetNotFalsified(m));
    if let ModelSpec::Shape { target: t } = &c.model {
        // Detachment itself has no model; the shape argument is the refutation.
        return if c.target == "mp" {
            Ok(format!("shape: `{}` is provable with mp but no other conclusion matches it", t))
        } else {
            fail("shape certificates only concern mp".into())
        };
    }
    let Some(w) = &c.witness else {
        return match c.model.validate(target) {
            Verdict::Falsified(r) if r.tau.is_some() => Ok(r.to_string()),
            other => fail(other.to_string()),
        };
    };
    let inst = object_instantiate(&w.tau, target).map_err(|e| CertError::TargetNotFalsified(e.to_string()))?;
    let ok = match &c.model {
        ModelSpec::Table(t) => tt_refutes(t, target, &w.tau).map_err(|e| CertError::TargetNotFalsified(e.to_string()))?,
        ModelSpec::Gen(_) => gen_refutes(target, &w.tau),
        ModelSpec::Kripke(k) => world_refutes(k, target, w)?,
        ModelSpec::Neighborhood(n) => world_refutes(n, target, w)?,
        ModelSpec::FirstOrder { model, .. } => {
            let fw = FoWitness { tau: w.tau.clone(), instance: inst.clone(), assignment: w.assignment.clone() };
            check_fo_witness(model, target, &fw)
        }
        ModelSpec::Shape { .. } => unreachable!("handled above"),
    };
    if !ok {
        return fail(format!("witness {} does not refute `{}`", w.tau, inst));
    }
    let mut at = String::new();
    if let Some(world) = &w.world {
        at = format!(" at world {}", world);
    }
    if !w.assignment.is_empty() {
        let asg: Vec<String> = w.assignment.iter().map(|(v, d)| format!("v{}={}", v, d)).collect();
        at = format!(" at {}", asg.join(" "));
    }
    Ok(format!("{}: `{}` fails{}", w.tau, inst, at))
}

fn world_refutes<M: ModalModel>(m: &M, target: &Scheme, w: &CertWitness) -> Result<bool, CertError> {
    let name = w.world.as_deref().ok_or_else(|| CertError::TargetNotFalsified("modal witness needs a world".into()))?;
    let idx = m
        .world_names()
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| CertError::TargetNotFalsified(format!("unknown world {}", name)))?;
    modal_refutes(m, target, &w.tau, idx).map_err(|e| CertError::TargetNotFalsified(e.to_string()))
}
