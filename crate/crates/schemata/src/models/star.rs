//! Truth relative to an anchored variable: a formula is *-true when it
//! holds under every assignment sending the anchored variable to the
//! anchor. Detachment preserves this; generalization does not.

use std::collections::{BTreeMap, BTreeSet};

use crate::objectlevel::{
    enumerate_formulas, fm_mvs, fo_eval, object_instantiate, var_mvs, FirstOrderModel, FormulaWithHyps, ObjectError,
    ObjectFormula, ObjectSubstitution,
};
use crate::schemes::Scheme;
use crate::syntax::Language;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarTruthModel {
    pub base: FirstOrderModel,
    pub anchor: usize,
    pub anchored: u32,
}

impl StarTruthModel {
    /// Two elements, P true exactly at the anchor 0, anchored variable v0.
    pub fn standard() -> Self {
        StarTruthModel { base: FirstOrderModel::standard(2).with_pred("P", 1, [vec![0]]), anchor: 0, anchored: 0 }
    }

    pub fn check(&self) -> Result<(), ObjectError> {
        self.base.check()?;
        if self.anchor >= self.base.size {
            return Err(ObjectError::MalformedModel(format!("anchor {} outside the domain", self.anchor)));
        }
        Ok(())
    }
}

pub fn star_true(s: &StarTruthModel, f: &ObjectFormula) -> Result<bool, ObjectError> {
    s.check()?;
    let free: Vec<u32> = f.free_vars().into_iter().filter(|&v| v != s.anchored).collect();
    let n = s.base.size;
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut asg: BTreeMap<u32, usize> = free.iter().copied().zip(digits.iter().copied()).collect();
        asg.insert(s.anchored, s.anchor);
        if !fo_eval(&s.base, f, &asg)? {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(true);
            }
            digits[k] += 1;
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleCheck {
    /// No instance with *-true hypotheses and a conclusion that is not.
    Preserves { formulas: usize, classes: usize, instances: u64 },
    Fails { tau: ObjectSubstitution, instance: FormulaWithHyps },
}

/// Checks whether a rule preserves *-truth on the instances whose formula
/// images have height at most `height` over `v0, v1`. Formulas with the
/// same extension and variables are tried once.
pub fn star_rule_check(s: &StarTruthModel, rule: &Scheme, lang: &Language, height: usize) -> Result<RuleCheck, ObjectError> {
    s.check()?;
    let vars = [0u32, 1];
    let formulas = enumerate_formulas(lang, &vars, height);
    let n = s.base.size;
    // Class key: truth at each (v0, v1) point, and the variables used.
    let mut classes: Vec<ObjectFormula> = Vec::new();
    let mut seen: BTreeSet<(Vec<bool>, BTreeSet<u32>)> = BTreeSet::new();
    for f in &formulas {
        let mut ext = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let asg: BTreeMap<u32, usize> = [(0, a), (1, b)].into_iter().collect();
                ext.push(fo_eval(&s.base, f, &asg)?);
            }
        }
        if seen.insert((ext, f.variables())) {
            classes.push(f.clone());
        }
    }
    let xs = var_mvs(rule);
    let fs = fm_mvs(rule);
    let mut instances = 0u64;
    let mut radices: Vec<usize> = vec![vars.len(); xs.len()];
    radices.extend(std::iter::repeat(classes.len()).take(fs.len()));
    let mut found: Option<(ObjectSubstitution, FormulaWithHyps)> = None;
    let mut err = None;
    super::odometer(&radices, |d| {
        let mut tau = ObjectSubstitution::new();
        for (k, &x) in xs.iter().enumerate() {
            tau.vr.insert(x, vars[d[k]]);
        }
        for (k, &f) in fs.iter().enumerate() {
            tau.fm.insert(f, classes[d[xs.len() + k]].clone());
        }
        let Ok(inst) = object_instantiate(&tau, rule) else { return true };
        instances += 1;
        let check = || -> Result<bool, ObjectError> {
            for h in &inst.hyps {
                if !star_true(s, h)? {
                    return Ok(false);
                }
            }
            Ok(!star_true(s, &inst.concl)?)
        };
        match check() {
            Ok(true) => {
                found = Some((tau, inst));
                false
            }
            Ok(false) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(match found {
        Some((tau, instance)) => RuleCheck::Fails { tau, instance },
        None => RuleCheck::Preserves { formulas: formulas.len(), classes: classes.len(), instances },
    })
}
