//! A classical valuation, standard on equality, whose universal quantifier
//! is weakened by a family of auxiliary two-valued valuations `val_i`. It
//! validates every axiom but refutes generalization once a predicate is
//! present.

use std::collections::BTreeMap;

use crate::objectlevel::{fm_mvs, identification_patterns, object_instantiate, rename_vars, var_mvs, ObjectFormula, ObjectSubstitution};
use crate::schemes::Scheme;
use crate::syntax::{Language, Metaformula, Mf};

use super::{odometer, Refutation, Verdict};

fn val(m: &Metaformula) -> u8 {
    match m {
        Mf::Equals(a, b) => (a == b) as u8,
        Mf::Pred(..) => 1,
        Mf::Not(a) => 1 - val(a),
        Mf::Implies(a, b) => (val(a) == 0 || val(b) == 1) as u8,
        Mf::Forall(i, a) => val(a) * val_i(*i, a),
        Mf::Fm(_) => 0,
    }
}

fn val_i(i: u32, m: &Metaformula) -> u8 {
    match m {
        Mf::Equals(j, k) => (j == k || (i != *j && i != *k)) as u8,
        Mf::Pred(_, args) => !args.contains(&i) as u8,
        Mf::Implies(a, b) => (val_i(i, a) == 0 || val_i(i, b) == 1) as u8,
        Mf::Forall(j, a) => {
            if *j == i {
                1
            } else {
                val_i(i, a)
            }
        }
        // Negations are ignored unless a quantifier follows; on predicate
        // atoms likewise.
        Mf::Not(a) => match &**a {
            Mf::Forall(..) => 1,
            _ => val_i(i, a),
        },
        Mf::Fm(_) => 0,
    }
}

pub fn gen_eval(f: &ObjectFormula) -> u8 {
    val(f.tree())
}

pub fn gen_eval_i(i: u32, f: &ObjectFormula) -> u8 {
    val_i(i, f.tree())
}

/// Scheme validation for the valuation above. Formula metavariables range
/// over formulas up to `height` built from the variables they may mention
/// plus `fresh` private variables each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenValuation {
    pub lang: Language,
    pub height: usize,
    pub fresh: usize,
}

impl GenValuation {
    pub fn new(lang: Language) -> Self {
        GenValuation { lang, height: 3, fresh: 1 }
    }

    pub fn with_height(mut self, h: usize) -> Self {
        self.height = h;
        self
    }
}

/// What the valuation sees of a formula: its value, `val_i` for every
/// tracked `i`, and whether it is universally quantified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Profile {
    val: bool,
    vi: u64,
    quant: bool,
}

impl Profile {
    fn vi(&self, i: u32) -> bool {
        (self.vi >> i) & 1 == 1
    }

    fn not(self, all: u64) -> Profile {
        Profile { val: !self.val, vi: if self.quant { all } else { self.vi }, quant: false }
    }

    fn imp(self, o: Profile, all: u64) -> Profile {
        Profile { val: !self.val || o.val, vi: (all & !self.vi) | o.vi, quant: false }
    }

    fn forall(self, i: u32) -> Profile {
        Profile { val: self.val && self.vi(i), vi: self.vi | (1u64 << i), quant: true }
    }
}

fn atom_eq(a: u32, b: u32, tracked: u32) -> Profile {
    let mut vi = 0u64;
    for i in 0..tracked {
        if a == b || (i != a && i != b) {
            vi |= 1 << i;
        }
    }
    Profile { val: a == b, vi, quant: false }
}

fn atom_pred(args: &[u32], tracked: u32) -> Profile {
    let mut vi = 0u64;
    for i in 0..tracked {
        if !args.contains(&i) {
            vi |= 1 << i;
        }
    }
    Profile { val: true, vi, quant: false }
}

/// Profiles of formulas of height `<= h` over `vars`, with a shortest
/// representative each, and whether the set stopped growing.
fn profiles(lang: &Language, vars: &[u32], tracked: u32, h: usize) -> (BTreeMap<Profile, ObjectFormula>, bool) {
    let all = if tracked == 64 { u64::MAX } else { (1u64 << tracked) - 1 };
    let mut reps: BTreeMap<Profile, ObjectFormula> = BTreeMap::new();
    for &a in vars {
        for &b in vars {
            reps.entry(atom_eq(a, b, tracked)).or_insert_with(|| ObjectFormula::eq(a, b));
        }
    }
    for (name, arity) in lang.predicates() {
        odometer(&vec![vars.len(); arity], |d| {
            let args: Vec<u32> = d.iter().map(|&k| vars[k]).collect();
            reps.entry(atom_pred(&args, tracked)).or_insert_with(|| ObjectFormula::pred(name, args));
            true
        });
    }
    let mut saturated = false;
    for _ in 1..h {
        let known: Vec<(Profile, ObjectFormula)> = reps.iter().map(|(p, f)| (*p, f.clone())).collect();
        let before = reps.len();
        for (p, f) in &known {
            reps.entry(p.not(all)).or_insert_with(|| ObjectFormula::not(f.clone()));
            for &v in vars {
                reps.entry(p.forall(v)).or_insert_with(|| ObjectFormula::all(v, f.clone()));
            }
            for (q, g) in &known {
                reps.entry(p.imp(*q, all)).or_insert_with(|| ObjectFormula::imp(f.clone(), g.clone()));
            }
        }
        if reps.len() == before {
            saturated = true;
            break;
        }
    }
    (reps, saturated)
}

fn eval_profile(m: &Metaformula, fm: &dyn Fn(u32) -> Profile, tracked: u32) -> Profile {
    let all = if tracked == 64 { u64::MAX } else { (1u64 << tracked) - 1 };
    match m {
        Mf::Fm(i) => fm(*i),
        Mf::Equals(a, b) => atom_eq(*a, *b, tracked),
        Mf::Pred(_, args) => atom_pred(args, tracked),
        Mf::Not(a) => eval_profile(a, fm, tracked).not(all),
        Mf::Implies(a, b) => eval_profile(a, fm, tracked).imp(eval_profile(b, fm, tracked), all),
        Mf::Forall(x, a) => eval_profile(a, fm, tracked).forall(*x),
    }
}

/// Whether every hypothesis has value 1 and the conclusion 0.
pub fn gen_refutes(phi: &Scheme, tau: &ObjectSubstitution) -> bool {
    match object_instantiate(tau, phi) {
        Ok(inst) => inst.hyps.iter().all(|h| gen_eval(h) == 1) && gen_eval(&inst.concl) == 0,
        Err(_) => false,
    }
}

pub fn gen_validates(g: &GenValuation, phi: &Scheme) -> Verdict {
    let vars = var_mvs(phi);
    let fms = fm_mvs(phi);
    let patterns = identification_patterns(&vars, phi.dv());
    let mut all_saturated = true;
    let mut combos = 0u64;
    for pat in &patterns {
        let blocks = pat.values().copied().max().map_or(0, |b| b + 1);
        let tracked = blocks + (g.fresh * fms.len()) as u32;
        if tracked > 64 {
            return Verdict::Unresolved(format!("{} tracked variables exceed 64", tracked));
        }
        let hyps: Vec<Metaformula> = phi.hyps().iter().map(|h| rename_vars(h, pat)).collect();
        let concl = rename_vars(phi.concl(), pat);
        let mut options: Vec<Vec<(Profile, ObjectFormula)>> = Vec::new();
        for (k, &f) in fms.iter().enumerate() {
            let fmv = crate::syntax::Metavariable::fm(f);
            let mut allowed: Vec<u32> = (0..blocks)
                .filter(|&b| {
                    !phi.dv().iter().any(|&(x, y)| {
                        let other = if x == fmv { y } else if y == fmv { x } else { return false };
                        other.is_var() && pat[&other.index] == b
                    })
                })
                .collect();
            let start = blocks + (g.fresh * k) as u32;
            allowed.extend(start..start + g.fresh as u32);
            let (reps, sat) = profiles(&g.lang, &allowed, tracked, g.height);
            all_saturated &= sat;
            options.push(reps.into_iter().collect());
        }
        let radices: Vec<usize> = options.iter().map(Vec::len).collect();
        let mut bad: Option<Vec<usize>> = None;
        odometer(&radices, |d| {
            combos += 1;
            let fm = |i: u32| {
                let k = fms.iter().position(|&f| f == i).expect("formula metavariable");
                options[k][d[k]].0
            };
            let hyps_ok = hyps.iter().all(|h| eval_profile(h, &fm, tracked).val);
            if hyps_ok && !eval_profile(&concl, &fm, tracked).val {
                bad = Some(d.to_vec());
                return false;
            }
            true
        });
        if let Some(d) = bad {
            let mut tau = ObjectSubstitution::new();
            for (&x, &b) in pat {
                tau.vr.insert(x, b);
            }
            for (k, &f) in fms.iter().enumerate() {
                tau.fm.insert(f, options[k][d[k]].1.clone());
            }
            let instance = object_instantiate(&tau, phi).ok();
            debug_assert!(gen_refutes(phi, &tau));
            return Verdict::Falsified(Refutation {
                tau: Some(tau),
                instance,
                detail: "hypotheses have value 1, conclusion 0".into(),
            });
        }
    }
    Verdict::Validated(format!(
        "bounded: formula images of height <= {} with {} private variable(s) each, {} profile combinations{}",
        g.height,
        g.fresh,
        combos,
        if all_saturated { ", profile sets saturated" } else { "" }
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::{get_system, scheme};
    use crate::objectlevel::parse_object_formula;

    fn lang() -> Language {
        Language::new(&[("P", 1)]).unwrap()
    }

    fn f(s: &str) -> ObjectFormula {
        parse_object_formula(s, &lang()).unwrap()
    }

    #[test]
    fn named_values() {
        assert_eq!(gen_eval(&f("P v0")), 1);
        assert_eq!(gen_eval(&f("A. v0 P v0")), 0);
        assert_eq!(gen_eval(&f("A. v1 -. v1 = v0")), 0);
        assert_eq!(gen_eval(&f("A. v0 -. v0 = v0")), 0);
        assert_eq!(gen_eval_i(0, &f("-. A. v1 v1 = v0")), 1);
    }

    #[test]
    fn validates_tmm_but_gen() {
        let g = GenValuation::new(lang());
        for l in get_system("TMM").unwrap() {
            let v = gen_validates(&g, &scheme(&l).unwrap());
            if l == "gen" {
                assert!(v.is_falsified(), "{}", v);
            } else {
                assert!(v.is_validated(), "{}: {}", l, v);
            }
        }
    }

    #[test]
    fn gen_witness() {
        let tau = ObjectSubstitution::new().var(0, 0).formula(0, f("P v0"));
        assert!(gen_refutes(&scheme("gen").unwrap(), &tau));
    }
}
