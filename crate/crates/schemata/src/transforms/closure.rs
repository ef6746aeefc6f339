//! Bounded checks of the transform-closure arguments behind supertruth of
//! individual axiom schemes.
//!
//! Instances are enumerated with variable metavariables sent into
//! `{x0, x1, x2}` and formula metavariables sent to pure-equality
//! metaformulas over `{x0, x1}` up to a height bound. Every legitimate
//! nontrivial transform of every instance is then classified.

use std::fmt;

use thiserror::Error;

use crate::axiomdb;
use crate::objectlevel::{decide_eq_truth_capped, enumerate_formulas, fm_mvs, var_mvs};
use crate::schemes::{check_legitimate, instantiate, is_instance, DvSet, Scheme, Substitution};
use crate::syntax::{Language, Metaformula, Metavariable, Mf};

use super::{check_transform, transform_scheme, TransformSpec};

/// Variable images of the enumeration.
pub const VAR_POOL: [u32; 3] = [0, 1, 2];
/// Variables of the formula-metavariable images.
pub const IMAGE_VARS: [u32; 2] = [0, 1];
/// Domain cap for truth decisions inside the closure checks.
pub const DECIDE_CAP: usize = 4;

/// The eight schemes whose supertruth is argued by transform closure.
pub const SUPERTRUE1: [&str; 8] = ["ALLdistr", "modalD", "modal4", "modal5", "vacGen", "denot", "subst", "genEq"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureStats {
    pub label: String,
    pub image_height: usize,
    pub instances: usize,
    /// Legitimate nontrivial transforms examined.
    pub transforms: usize,
    /// Transforms blocked by a DV condition.
    pub blocked: usize,
    /// Results recognized as instances of the scheme.
    pub by_instance: usize,
    /// Results also equal to the `x_j ← x_i` substitution instance.
    pub by_substitution: usize,
    /// Results settled by a truth decision.
    pub by_decision: usize,
}

impl fmt::Display for ClosureStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} instances (images to height {}), {} transforms, {} blocked; {} instances, {} substitutions, {} decided",
            self.label,
            self.instances,
            self.image_height,
            self.transforms,
            self.blocked,
            self.by_instance,
            self.by_substitution,
            self.by_decision
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureFailure {
    #[error("{spec}-transform of `{instance}` is `{result}`, not an instance of {label}")]
    NotInstance { label: String, spec: TransformSpec, instance: Metaformula, result: Metaformula },
    #[error("{spec}-transform of `{instance}` is not the substitution instance")]
    NotSubstitution { spec: TransformSpec, instance: Metaformula },
    #[error("{spec}-transform of `{instance}` is `{result}`, which is not true")]
    NotTrue { spec: TransformSpec, instance: Metaformula, result: Metaformula },
    #[error("{spec}-transform of `{instance}` is legitimate and nontrivial")]
    UnexpectedTransform { spec: TransformSpec, instance: Metaformula },
    #[error("no closure argument for {0}")]
    Unsupported(String),
}

/// Pure-equality images over `IMAGE_VARS` of height at most `h`.
pub fn image_pool(h: usize) -> Vec<Metaformula> {
    enumerate_formulas(&Language::empty(), &IMAGE_VARS, h).into_iter().map(|f| f.tree().clone()).collect()
}

/// Legitimate instances of `phi` over `VAR_POOL` and `images`.
pub fn enumerate_instances(phi: &Scheme, images: &[Metaformula]) -> Vec<Scheme> {
    let vars = var_mvs(phi);
    let fms = fm_mvs(phi);
    let mut out = Vec::new();
    let mut vi = vec![0usize; vars.len()];
    loop {
        let mut base = Substitution::identity();
        for (k, &v) in vars.iter().enumerate() {
            base = base.var(v, VAR_POOL[vi[k]]);
        }
        let mut fi = vec![0usize; fms.len()];
        loop {
            let mut sigma = base.clone();
            for (k, &f) in fms.iter().enumerate() {
                sigma = sigma.formula(f, images[fi[k]].clone());
            }
            if check_legitimate(&sigma, phi).is_ok() {
                out.push(instantiate(&sigma, phi, &DvSet::new()).expect("legitimate"));
            }
            if !bump(&mut fi, images.len()) {
                break;
            }
        }
        if !bump(&mut vi, VAR_POOL.len()) {
            break;
        }
    }
    out
}

fn bump(idx: &mut [usize], n: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}

/// Nontrivial transforms between occurring variables, split into the
/// legitimate results and a count of DV-blocked ones.
fn transforms_of(psi: &Scheme) -> (Vec<(TransformSpec, Scheme)>, usize) {
    let vars: Vec<u32> = psi.occurring().into_iter().filter(|m| m.is_var()).map(|m| m.index).collect();
    let mut out = Vec::new();
    let mut blocked = 0;
    for &i in &vars {
        for &j in &vars {
            if i == j {
                continue;
            }
            let spec = TransformSpec::directed(i, j);
            if check_transform(spec, psi).is_err() {
                blocked += 1;
                continue;
            }
            out.push((spec, transform_scheme(spec, psi).expect("checked")));
        }
    }
    (out, blocked)
}

fn decided_true(s: &Scheme) -> bool {
    decide_eq_truth_capped(s, Some(DECIDE_CAP)).map(|d| d.truth).unwrap_or(false)
}

/// Antecedents along the right spine of an implication chain.
fn antecedents(m: &Metaformula) -> Vec<&Metaformula> {
    let mut out = Vec::new();
    let mut cur = m;
    while let Mf::Implies(a, b) = cur {
        out.push(a.as_ref());
        cur = b;
    }
    out
}

/// Checks the closure argument for one of `SUPERTRUE1`.
pub fn supertrue1_closure(label: &str, image_height: usize) -> Result<ClosureStats, ClosureFailure> {
    if !SUPERTRUE1.contains(&label) {
        return Err(ClosureFailure::Unsupported(label.to_string()));
    }
    let phi = axiomdb::scheme(label).map_err(|_| ClosureFailure::Unsupported(label.to_string()))?;
    let images = image_pool(image_height);
    let mut st = ClosureStats { label: label.to_string(), image_height, ..Default::default() };
    for psi in enumerate_instances(&phi, &images) {
        st.instances += 1;
        let (ts, blocked) = transforms_of(&psi);
        st.blocked += blocked;
        // Image of the bound variable of the skeleton.
        let k = match psi.concl() {
            _ if label == "genEq" || label == "denot" => None,
            _ => Some(binder_image(&phi, &psi)),
        };
        for (spec, t) in ts {
            st.transforms += 1;
            let fail_instance = || ClosureFailure::NotInstance {
                label: label.to_string(),
                spec,
                instance: psi.concl().clone(),
                result: t.concl().clone(),
            };
            match label {
                "denot" => {
                    return Err(ClosureFailure::UnexpectedTransform { spec, instance: psi.concl().clone() });
                }
                "genEq" => {
                    if is_instance(&t, &phi).is_some() {
                        st.by_instance += 1;
                        continue;
                    }
                    let refuted = antecedents(t.concl())
                        .into_iter()
                        .any(|a| decided_true(&Scheme::new(vec![], Mf::not(a.clone()), t.dv().clone())));
                    if !refuted {
                        return Err(ClosureFailure::NotTrue { spec, instance: psi.concl().clone(), result: t.concl().clone() });
                    }
                    st.by_decision += 1;
                }
                _ => {
                    if is_instance(&t, &phi).is_none() {
                        return Err(fail_instance());
                    }
                    st.by_instance += 1;
                    if Some(spec.i) == k {
                        if label == "vacGen" {
                            // DV(x, φ) blocks every such transform that is not trivial.
                            return Err(ClosureFailure::UnexpectedTransform { spec, instance: psi.concl().clone() });
                        }
                        let sub = Substitution::identity().var(spec.j, spec.i);
                        if sub.apply(psi.concl()) != *t.concl() {
                            return Err(ClosureFailure::NotSubstitution { spec, instance: psi.concl().clone() });
                        }
                        st.by_substitution += 1;
                    }
                }
            }
        }
    }
    if label == "denot" {
        // Without its DV condition the transform exists and is true.
        let free = phi.with_dv(DvSet::new());
        for spec in [TransformSpec::directed(0, 1), TransformSpec::directed(1, 0)] {
            let t = transform_scheme(spec, &free).expect("no DV");
            if !decided_true(&t) {
                return Err(ClosureFailure::NotTrue { spec, instance: free.concl().clone(), result: t.concl().clone() });
            }
            st.by_decision += 1;
        }
    }
    Ok(st)
}

fn binder_image(phi: &Scheme, psi: &Scheme) -> u32 {
    let sigma = is_instance(psi, phi).expect("an enumerated instance");
    sigma.var_image(0)
}

/// `ALLcomm` with `DV(x0, x1)`.
pub fn weak_allcomm() -> Scheme {
    let a = axiomdb::scheme("ALLcomm").expect("catalog");
    a.with_dv(DvSet::from_pairs([(Metavariable::var(0), Metavariable::var(1))]))
}

/// Every legitimate transform of an enumerated instance of the weakened
/// `ALLcomm` is again an instance, and is decided true.
pub fn weak_allcomm_closure(image_height: usize) -> Result<ClosureStats, ClosureFailure> {
    let phi = weak_allcomm();
    let mut st = ClosureStats { label: "ALLcomm+DV".into(), image_height, ..Default::default() };
    for psi in enumerate_instances(&phi, &image_pool(image_height)) {
        st.instances += 1;
        let (ts, blocked) = transforms_of(&psi);
        st.blocked += blocked;
        for (spec, t) in ts {
            st.transforms += 1;
            if is_instance(&t, &phi).is_none() {
                return Err(ClosureFailure::NotInstance {
                    label: st.label.clone(),
                    spec,
                    instance: psi.concl().clone(),
                    result: t.concl().clone(),
                });
            }
            st.by_instance += 1;
            if !decided_true(&t) {
                return Err(ClosureFailure::NotTrue { spec, instance: psi.concl().clone(), result: t.concl().clone() });
            }
            st.by_decision += 1;
        }
    }
    Ok(st)
}

/// The `{x,y}`-transforms of formula-metavariable-free `ALLcomm` instances,
/// decided as schemes.
///
/// Without extra DV conditions this fails: a variable free in `Φ` may later
/// be identified with `y`, which the bound-variable renaming argument does
/// not allow. With `separate` set, every other variable of the instance is
/// kept distinct from `x` and `y` and all transforms come out true.
pub fn allcomm_semisupertruth(image_height: usize, separate: bool) -> Result<ClosureStats, ClosureFailure> {
    let phi = axiomdb::scheme("ALLcomm").expect("catalog");
    let label = if separate { "ALLcomm{x,y}+DV" } else { "ALLcomm{x,y}" };
    let mut st = ClosureStats { label: label.into(), image_height, ..Default::default() };
    for psi in enumerate_instances(&phi, &image_pool(image_height)) {
        let sigma = is_instance(&psi, &phi).expect("an enumerated instance");
        let (x, y) = (sigma.var_image(0), sigma.var_image(1));
        if x == y {
            continue;
        }
        let psi = if separate {
            let mut dv = psi.dv().clone();
            for v in var_mvs(&psi) {
                for b in [x, y] {
                    if v != x && v != y {
                        dv.insert(Metavariable::var(v), Metavariable::var(b));
                    }
                }
            }
            psi.with_dv(dv)
        } else {
            psi
        };
        st.instances += 1;
        let spec = TransformSpec::sym(x, y);
        let t = transform_scheme(spec, &psi).expect("x, y are not DV");
        st.transforms += 1;
        if !decided_true(&t) {
            return Err(ClosureFailure::NotTrue { spec, instance: psi.concl().clone(), result: t.concl().clone() });
        }
        st.by_decision += 1;
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::formula;

    #[test]
    fn pool_sizes() {
        assert_eq!(image_pool(1).len(), 4);
        assert_eq!(image_pool(2).len(), 32);
    }

    #[test]
    fn closure_small() {
        for label in SUPERTRUE1 {
            let st = supertrue1_closure(label, 1).unwrap_or_else(|e| panic!("{}: {}", label, e));
            assert!(st.instances > 0, "{}", st);
        }
        let d = supertrue1_closure("denot", 2).unwrap();
        assert_eq!(d.transforms, 0);
        assert!(d.blocked > 0);
        let g = supertrue1_closure("genEq", 1).unwrap();
        assert!(g.by_decision > 0);
        assert!(matches!(supertrue1_closure("ALLcomm", 1), Err(ClosureFailure::Unsupported(_))));
    }

    #[test]
    fn allcomm_fails_closure_without_dv() {
        // The argument really depends on the DV condition.
        let phi = axiomdb::scheme("ALLcomm").unwrap();
        let psi = Scheme::axiom(formula("( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )"));
        let t = transform_scheme(TransformSpec::directed(0, 1), &psi).unwrap();
        assert!(is_instance(&t, &phi).is_none());
        assert!(weak_allcomm_closure(1).is_ok());
        assert!(allcomm_semisupertruth(1, true).unwrap().by_decision > 0);
        match allcomm_semisupertruth(1, false) {
            Err(ClosureFailure::NotTrue { result, .. }) => assert!(result.quantifier_depth() == 2),
            other => panic!("{:?}", other),
        }
    }
}
