//! Kripke and neighborhood models. Every `∀x` is read as necessity,
//! equality atoms as a fixed set of worlds, predicates by their truth sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::objectlevel::{fm_mvs, object_instantiate, ObjectFormula, ObjectSubstitution};
use crate::schemes::Scheme;
use crate::syntax::{Metaformula, Mf};

use super::{odometer, ModelError, Refutation, Verdict};

/// Worlds are bits of a `u64`; at most 16 worlds.
pub trait ModalModel {
    fn world_names(&self) -> &[String];
    fn necessity(&self, s: u64) -> u64;
    fn pred_set(&self, name: &str) -> Option<u64>;
    fn pred_names(&self) -> Vec<String>;
    fn eq_set(&self) -> u64;

    fn world_count(&self) -> usize {
        self.world_names().len()
    }

    fn full(&self) -> u64 {
        (1u64 << self.world_count()) - 1
    }

    fn check(&self) -> Result<(), ModelError> {
        let n = self.world_count();
        if n == 0 || n > 16 {
            return Err(ModelError::Malformed(format!("{} worlds (need 1..=16)", n)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    /// `access[w][v]`: `v` is accessible from `w`.
    pub access: Vec<Vec<bool>>,
    pub preds: BTreeMap<String, u64>,
    pub eq_everywhere: bool,
}

impl KripkeModel {
    /// Worlds A and B, reflexive, A sees B; P true exactly at A.
    pub fn modal5() -> Self {
        KripkeModel {
            worlds: vec!["A".into(), "B".into()],
            access: vec![vec![true, true], vec![false, true]],
            preds: [("P".to_string(), 0b01)].into_iter().collect(),
            eq_everywhere: true,
        }
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.worlds.len()).all(|w| self.access[w][w])
    }
}

impl ModalModel for KripkeModel {
    fn world_names(&self) -> &[String] {
        &self.worlds
    }

    fn necessity(&self, s: u64) -> u64 {
        let mut out = 0;
        for (w, row) in self.access.iter().enumerate() {
            if row.iter().enumerate().all(|(v, &r)| !r || (s >> v) & 1 == 1) {
                out |= 1 << w;
            }
        }
        out
    }

    fn pred_set(&self, name: &str) -> Option<u64> {
        self.preds.get(name).copied()
    }

    fn pred_names(&self) -> Vec<String> {
        self.preds.keys().cloned().collect()
    }

    fn eq_set(&self) -> u64 {
        if self.eq_everywhere {
            self.full()
        } else {
            0
        }
    }

    fn check(&self) -> Result<(), ModelError> {
        let n = self.worlds.len();
        if n == 0 || n > 16 {
            return Err(ModelError::Malformed(format!("{} worlds (need 1..=16)", n)));
        }
        if self.access.len() != n || self.access.iter().any(|r| r.len() != n) {
            return Err(ModelError::Malformed("accessibility matrix has the wrong size".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodModel {
    pub worlds: Vec<String>,
    pub nbhd: Vec<BTreeSet<u64>>,
    pub preds: BTreeMap<String, u64>,
    pub eq_everywhere: bool,
}

impl NeighborhoodModel {
    /// Three worlds; P is false exactly at w3 and Q true exactly at w2.
    pub fn alldistr() -> Self {
        let sets = |v: &[u64]| v.iter().copied().collect::<BTreeSet<u64>>();
        NeighborhoodModel {
            worlds: vec!["w1".into(), "w2".into(), "w3".into()],
            nbhd: vec![sets(&[0b001, 0b011, 0b111]), sets(&[0b011, 0b110, 0b111]), sets(&[0b100, 0b101, 0b110, 0b111])],
            preds: [("P".to_string(), 0b011), ("Q".to_string(), 0b010)].into_iter().collect(),
            eq_everywhere: true,
        }
    }
}

impl ModalModel for NeighborhoodModel {
    fn world_names(&self) -> &[String] {
        &self.worlds
    }

    fn necessity(&self, s: u64) -> u64 {
        let mut out = 0;
        for (w, n) in self.nbhd.iter().enumerate() {
            if n.contains(&s) {
                out |= 1 << w;
            }
        }
        out
    }

    fn pred_set(&self, name: &str) -> Option<u64> {
        self.preds.get(name).copied()
    }

    fn pred_names(&self) -> Vec<String> {
        self.preds.keys().cloned().collect()
    }

    fn eq_set(&self) -> u64 {
        if self.eq_everywhere {
            self.full()
        } else {
            0
        }
    }

    fn check(&self) -> Result<(), ModelError> {
        let n = self.worlds.len();
        if n == 0 || n > 16 {
            return Err(ModelError::Malformed(format!("{} worlds (need 1..=16)", n)));
        }
        if self.nbhd.len() != n {
            return Err(ModelError::Malformed("one neighborhood set per world required".into()));
        }
        Ok(())
    }
}

fn eval_set<M: ModalModel + ?Sized>(
    m: &M,
    f: &Metaformula,
    fm: &dyn Fn(u32) -> u64,
) -> Result<u64, ModelError> {
    let full = m.full();
    Ok(match f {
        Mf::Fm(i) => fm(*i),
        Mf::Equals(..) => m.eq_set(),
        Mf::Pred(n, _) => m.pred_set(n).ok_or_else(|| ModelError::UnvaluedPredicate(n.to_string()))?,
        Mf::Not(a) => full & !eval_set(m, a, fm)?,
        Mf::Implies(a, b) => (full & !eval_set(m, a, fm)?) | eval_set(m, b, fm)?,
        Mf::Forall(_, a) => m.necessity(eval_set(m, a, fm)?),
    })
}

/// Worlds where an object formula holds.
pub fn modal_eval<M: ModalModel + ?Sized>(m: &M, f: &ObjectFormula) -> Result<u64, ModelError> {
    eval_set(m, f.tree(), &|_| 0)
}

/// World at which the instance is refuted: hypotheses true everywhere,
/// conclusion false there.
pub fn modal_refutes<M: ModalModel + ?Sized>(m: &M, phi: &Scheme, tau: &ObjectSubstitution, world: usize) -> Result<bool, ModelError> {
    let inst = object_instantiate(tau, phi).map_err(|e| ModelError::Unsupported(e.to_string()))?;
    for h in &inst.hyps {
        if modal_eval(m, h)? != m.full() {
            return Ok(false);
        }
    }
    Ok((modal_eval(m, &inst.concl)? >> world) & 1 == 0)
}

/// Definable sets with a shortest defining formula, over one variable.
fn definable<M: ModalModel + ?Sized>(m: &M, v: u32) -> BTreeMap<u64, ObjectFormula> {
    let full = m.full();
    let mut reps: BTreeMap<u64, ObjectFormula> = BTreeMap::new();
    reps.insert(m.eq_set(), ObjectFormula::eq(v, v));
    for name in m.pred_names() {
        if let Some(s) = m.pred_set(&name) {
            reps.entry(s).or_insert_with(|| ObjectFormula::pred(&name, vec![v]));
        }
    }
    loop {
        let known: Vec<(u64, ObjectFormula)> = reps.iter().map(|(s, f)| (*s, f.clone())).collect();
        let before = reps.len();
        for (s, f) in &known {
            reps.entry(full & !s).or_insert_with(|| ObjectFormula::not(f.clone()));
            reps.entry(m.necessity(*s)).or_insert_with(|| ObjectFormula::all(v, f.clone()));
            for (t, g) in &known {
                reps.entry((full & !s) | t).or_insert_with(|| ObjectFormula::imp(f.clone(), g.clone()));
            }
        }
        if reps.len() == before {
            return reps;
        }
    }
}

fn validate_sets<M: ModalModel + ?Sized>(m: &M, phi: &Scheme) -> Verdict {
    if let Err(e) = m.check() {
        return Verdict::Unresolved(e.to_string());
    }
    let fms = fm_mvs(phi);
    let w = m.world_count();
    let subsets = 1usize << w;
    let radices = vec![subsets; fms.len()];
    if (subsets as f64).powi(fms.len() as i32) > 1e8 {
        return Verdict::Unresolved("too many subset assignments".into());
    }
    let mut bad: Option<(Vec<usize>, usize)> = None;
    let mut err = None;
    let mut count = 0u64;
    odometer(&radices, |d| {
        count += 1;
        let fm = |i: u32| d[fms.iter().position(|&f| f == i).expect("formula metavariable")] as u64;
        let run = || -> Result<Option<usize>, ModelError> {
            for h in phi.hyps() {
                if eval_set(m, h, &fm)? != m.full() {
                    return Ok(None);
                }
            }
            let c = eval_set(m, phi.concl(), &fm)?;
            Ok((0..w).find(|&x| (c >> x) & 1 == 0))
        };
        match run() {
            Ok(Some(x)) => {
                bad = Some((d.to_vec(), x));
                false
            }
            Ok(None) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    if let Some(e) = err {
        return Verdict::Unresolved(e.to_string());
    }
    let Some((d, world)) = bad else {
        return Verdict::Validated(format!("exact: {} subset assignments", count));
    };
    let names = m.world_names();
    let show = |s: u64| {
        let ws: Vec<&str> = (0..w).filter(|x| (s >> x) & 1 == 1).map(|x| names[x].as_str()).collect();
        format!("{{{}}}", ws.join(","))
    };
    let sets: Vec<String> = fms.iter().zip(&d).map(|(f, &s)| format!("f{} true at {}", f, show(s as u64))).collect();
    let detail = format!("conclusion false at {}; {}", names[world], sets.join(", "));
    // Realize the sets with private variables so DV conditions hold.
    let top = phi.occurring().iter().filter(|x| x.is_var()).map(|x| x.index + 1).max().unwrap_or(0);
    let mut tau = ObjectSubstitution::new();
    for x in phi.occurring().iter().filter(|x| x.is_var()) {
        tau.vr.insert(x.index, x.index);
    }
    let mut realized = true;
    for (k, (&f, &s)) in fms.iter().zip(&d).enumerate() {
        let reps = definable(m, top + k as u32);
        match reps.get(&(s as u64)) {
            Some(g) => {
                tau.fm.insert(f, g.clone());
            }
            None => realized = false,
        }
    }
    if realized && modal_refutes(m, phi, &tau, world) == Ok(true) {
        let instance = object_instantiate(&tau, phi).ok();
        return Verdict::Falsified(Refutation { tau: Some(tau), instance, detail });
    }
    Verdict::Falsified(Refutation { tau: None, instance: None, detail })
}

/// Frame-style validity: formula metavariables range over all sets of
/// worlds; hypotheses true everywhere must force the conclusion everywhere.
pub fn kripke_validates(k: &KripkeModel, phi: &Scheme) -> Verdict {
    validate_sets(k, phi)
}

pub fn neighborhood_validates(n: &NeighborhoodModel, phi: &Scheme) -> Verdict {
    validate_sets(n, phi)
}
