//! Many-valued truth-table valuations that ignore (or nearly ignore)
//! quantifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::objectlevel::{
    fm_mvs, identification_patterns, object_instantiate, rename_vars, var_mvs, ObjectFormula, ObjectSubstitution,
};
use crate::schemes::Scheme;
use crate::syntax::{Metaformula, Mf};

use super::{odometer, ModelError, Refutation, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqRule {
    Constant(u8),
    /// `same` when both sides are the same variable, else `diff`.
    IdentityIndexed { same: u8, diff: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantRule {
    /// `val(∀v φ) = val(φ)`.
    Ignore,
    /// `val(∀v (φ→ψ))` is the largest designated value; other quantified
    /// formulas are ignored.
    MonkAllDistr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTableModel {
    pub value_count: u8,
    /// `imp[a][b]` is the value of `a → b`.
    pub imp: Vec<Vec<u8>>,
    pub neg: Vec<u8>,
    pub designated: BTreeSet<u8>,
    pub eq_rule: EqRule,
    /// Constant value of each predicate, whatever its arguments.
    pub pred_rule: BTreeMap<String, u8>,
    pub quant: QuantRule,
}

impl TruthTableModel {
    /// Designated value 0, quantifiers ignored, equality constant 0.
    pub fn new(imp: Vec<Vec<u8>>, neg: Vec<u8>) -> Self {
        TruthTableModel {
            value_count: neg.len() as u8,
            imp,
            neg,
            designated: [0].into_iter().collect(),
            eq_rule: EqRule::Constant(0),
            pred_rule: BTreeMap::new(),
            quant: QuantRule::Ignore,
        }
    }

    /// Two-valued classical tables with 1 designated; equality true.
    pub fn classical() -> Self {
        TruthTableModel {
            designated: [1].into_iter().collect(),
            eq_rule: EqRule::Constant(1),
            ..TruthTableModel::new(vec![vec![1, 1], vec![0, 1]], vec![1, 0])
        }
    }

    /// The five-valued table refuting minimp.
    pub fn minimp_table() -> Self {
        TruthTableModel::new(
            vec![
                vec![0, 1, 1, 1, 1],
                vec![0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0],
                vec![0, 0, 4, 0, 4],
                vec![0, 0, 3, 3, 0],
            ],
            vec![2, 0, 0, 1, 1],
        )
    }

    /// Gödel's three-valued table.
    pub fn godel() -> Self {
        TruthTableModel::new(vec![vec![0, 1, 2], vec![0, 0, 2], vec![0, 0, 0]], vec![2, 2, 0])
    }

    pub fn contrap_table() -> Self {
        TruthTableModel {
            eq_rule: EqRule::IdentityIndexed { same: 0, diff: 2 },
            ..TruthTableModel::new(vec![vec![0, 1, 1], vec![0, 0, 0], vec![0, 0, 0]], vec![1, 0, 1])
        }
    }

    /// Classical implication, standard on equality, every negation true.
    pub fn notelim_valuation() -> Self {
        TruthTableModel {
            neg: vec![1, 1],
            eq_rule: EqRule::IdentityIndexed { same: 1, diff: 0 },
            ..TruthTableModel::classical()
        }
    }

    /// Classical, standard on equality, quantifiers ignored.
    pub fn denot_valuation() -> Self {
        TruthTableModel { eq_rule: EqRule::IdentityIndexed { same: 1, diff: 0 }, ..TruthTableModel::classical() }
    }

    /// Classical with atoms true and quantified implications true.
    pub fn monk_alldistr() -> Self {
        TruthTableModel { quant: QuantRule::MonkAllDistr, ..TruthTableModel::classical() }
    }

    pub fn with_pred(mut self, name: &str, value: u8) -> Self {
        self.pred_rule.insert(name.to_string(), value);
        self
    }

    pub fn with_designated<I: IntoIterator<Item = u8>>(mut self, d: I) -> Self {
        self.designated = d.into_iter().collect();
        self
    }

    pub fn check(&self) -> Result<(), ModelError> {
        let n = self.value_count as usize;
        let bad = |m: &str| Err(ModelError::Malformed(m.to_string()));
        if n == 0 {
            return bad("no truth values");
        }
        if self.imp.len() != n || self.imp.iter().any(|r| r.len() != n) || self.neg.len() != n {
            return bad("table dimensions do not match the value count");
        }
        let ok = |v: u8| (v as usize) < n;
        if !self.imp.iter().flatten().all(|&v| ok(v)) || !self.neg.iter().all(|&v| ok(v)) {
            return bad("table entry out of range");
        }
        if self.designated.is_empty() {
            return bad("empty designated set");
        }
        if !self.designated.iter().all(|&v| ok(v)) {
            return bad("designated value out of range");
        }
        let eq_ok = match self.eq_rule {
            EqRule::Constant(c) => ok(c),
            EqRule::IdentityIndexed { same, diff } => ok(same) && ok(diff),
        };
        if !eq_ok || !self.pred_rule.values().all(|&v| ok(v)) {
            return bad("atomic value out of range");
        }
        Ok(())
    }

    pub fn is_designated(&self, v: u8) -> bool {
        self.designated.contains(&v)
    }

    fn top(&self) -> u8 {
        *self.designated.iter().next_back().expect("nonempty designated set")
    }

    /// Value and whether the formula is an implication (the Monk rule needs it).
    fn eval(&self, m: &Metaformula, leaf: &mut dyn FnMut(&Metaformula) -> Option<Cell>) -> Option<Cell> {
        Some(match m {
            Mf::Fm(_) | Mf::Pred(..) | Mf::Equals(..) => leaf(m)?,
            Mf::Not(a) => Cell { v: self.neg[self.eval(a, leaf)?.v as usize], imp: false },
            Mf::Implies(a, b) => {
                let x = self.eval(a, leaf)?.v;
                let y = self.eval(b, leaf)?.v;
                Cell { v: self.imp[x as usize][y as usize], imp: true }
            }
            Mf::Forall(_, a) => {
                let c = self.eval(a, leaf)?;
                match self.quant {
                    QuantRule::MonkAllDistr if c.imp => Cell { v: self.top(), imp: false },
                    _ => Cell { v: c.v, imp: false },
                }
            }
        })
    }

    fn eq_value(&self, same: bool) -> u8 {
        match self.eq_rule {
            EqRule::Constant(c) => c,
            EqRule::IdentityIndexed { same: s, diff: d } => {
                if same {
                    s
                } else {
                    d
                }
            }
        }
    }
}

impl fmt::Display for TruthTableModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.value_count as usize;
        write!(f, " -> |")?;
        for b in 0..n {
            write!(f, " {}", b)?;
        }
        writeln!(f, " | -.")?;
        for a in 0..n {
            let mark = if self.is_designated(a as u8) { '*' } else { ' ' };
            write!(f, "{}{:>2} |", mark, a)?;
            for b in 0..n {
                write!(f, " {}", self.imp[a][b])?;
            }
            writeln!(f, " | {}", self.neg[a])?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Cell {
    v: u8,
    imp: bool,
}

/// Value of an object formula. Equality atoms compare variable indices.
pub fn tt_eval(t: &TruthTableModel, f: &ObjectFormula) -> Result<u8, ModelError> {
    t.check()?;
    let mut missing = None;
    let r = t.eval(f.tree(), &mut |leaf| match leaf {
        Mf::Equals(a, b) => Some(Cell { v: t.eq_value(a == b), imp: false }),
        Mf::Pred(name, _) => match t.pred_rule.get(&**name) {
            Some(&v) => Some(Cell { v, imp: false }),
            None => {
                missing = Some(name.to_string());
                None
            }
        },
        _ => None,
    });
    match (r, missing) {
        (Some(c), _) => Ok(c.v),
        (None, Some(name)) => Err(ModelError::UnvaluedPredicate(name)),
        (None, None) => Err(ModelError::Unsupported("formula metavariable in an object formula".into())),
    }
}

/// Whether the instance is refuted: every hypothesis designated and the
/// conclusion not.
pub fn tt_refutes(t: &TruthTableModel, phi: &Scheme, tau: &ObjectSubstitution) -> Result<bool, ModelError> {
    let inst = object_instantiate(tau, phi).map_err(|e| ModelError::Unsupported(e.to_string()))?;
    for h in &inst.hyps {
        if !t.is_designated(tt_eval(t, h)?) {
            return Ok(false);
        }
    }
    Ok(!t.is_designated(tt_eval(t, &inst.concl)?))
}

/// Shortest object formula realizing each reachable cell, built from
/// the given variables only.
fn realizers(t: &TruthTableModel, a: u32, b: u32) -> BTreeMap<Cell, ObjectFormula> {
    let mut reps: BTreeMap<Cell, ObjectFormula> = BTreeMap::new();
    let mut frontier: Vec<(Cell, ObjectFormula)> = Vec::new();
    let add = |c: Cell, f: ObjectFormula, reps: &mut BTreeMap<Cell, ObjectFormula>, fr: &mut Vec<_>| {
        if !reps.contains_key(&c) {
            reps.insert(c, f.clone());
            fr.push((c, f));
        }
    };
    add(Cell { v: t.eq_value(true), imp: false }, ObjectFormula::eq(a, a), &mut reps, &mut frontier);
    add(Cell { v: t.eq_value(false), imp: false }, ObjectFormula::eq(a, b), &mut reps, &mut frontier);
    for (name, &v) in &t.pred_rule {
        // Arity is irrelevant to the value; unary use is enough for a witness.
        add(Cell { v, imp: false }, ObjectFormula::pred(name, vec![a]), &mut reps, &mut frontier);
    }
    while !frontier.is_empty() {
        let known: Vec<(Cell, ObjectFormula)> = reps.iter().map(|(c, f)| (*c, f.clone())).collect();
        let mut next = Vec::new();
        for (c, f) in &known {
            add(Cell { v: t.neg[c.v as usize], imp: false }, ObjectFormula::not(f.clone()), &mut reps, &mut next);
            let q = match t.quant {
                QuantRule::MonkAllDistr if c.imp => t.top(),
                _ => c.v,
            };
            add(Cell { v: q, imp: false }, ObjectFormula::all(a, f.clone()), &mut reps, &mut next);
            for (d, g) in &known {
                let v = t.imp[c.v as usize][d.v as usize];
                add(Cell { v, imp: true }, ObjectFormula::imp(f.clone(), g.clone()), &mut reps, &mut next);
            }
        }
        frontier = next;
    }
    reps
}

/// Exact decision over all values of the formula metavariables, all
/// identification patterns respecting DV, and all values of predicate
/// atoms without a fixed value. A refutation is realized by object
/// formulas when possible.
pub fn tt_validates(t: &TruthTableModel, phi: &Scheme) -> Verdict {
    if let Err(e) = t.check() {
        return Verdict::Unresolved(e.to_string());
    }
    let n = t.value_count;
    let vars = var_mvs(phi);
    let fms = fm_mvs(phi);
    let patterns = identification_patterns(&vars, phi.dv());
    let monk = t.quant == QuantRule::MonkAllDistr;
    let all_cells: Vec<Cell> =
        (0..n).flat_map(|v| if monk { vec![Cell { v, imp: false }, Cell { v, imp: true }] } else { vec![Cell { v, imp: false }] }).collect();
    let mut valuations = 0u64;
    for realized_only in [true, false] {
        for pat in &patterns {
            let blocks = pat.values().copied().max().map_or(0, |b| b + 1);
            let hyps: Vec<Metaformula> = phi.hyps().iter().map(|h| rename_vars(h, pat)).collect();
            let concl = rename_vars(phi.concl(), pat);
            // Each formula metavariable gets its own two fresh variables.
            let options: Vec<Vec<(Cell, Option<ObjectFormula>)>> = fms
                .iter()
                .enumerate()
                .map(|(k, _)| {
                    if realized_only {
                        let a = blocks + 2 * k as u32;
                        let mut r: Vec<(Cell, Option<ObjectFormula>)> =
                            realizers(t, a, a + 1).into_iter().map(|(c, f)| (c, Some(f))).collect();
                        if !monk {
                            r.retain(|(c, _)| !c.imp);
                            let mut seen = BTreeSet::new();
                            r.retain(|(c, _)| seen.insert(c.v));
                        }
                        r
                    } else {
                        all_cells.iter().map(|&c| (c, None)).collect()
                    }
                })
                .collect();
            let mut free_atoms: Vec<Metaformula> = Vec::new();
            for f in hyps.iter().chain(std::iter::once(&concl)) {
                collect_free_atoms(t, f, &mut free_atoms);
            }
            let mut radices: Vec<usize> = options.iter().map(Vec::len).collect();
            radices.extend(std::iter::repeat(n as usize).take(free_atoms.len()));
            let mut refuted: Option<Vec<usize>> = None;
            odometer(&radices, |d| {
                valuations += 1;
                let mut leaf = |m: &Metaformula| -> Option<Cell> {
                    match m {
                        Mf::Fm(i) => {
                            let k = fms.iter().position(|f| f == i)?;
                            Some(options[k][d[k]].0)
                        }
                        Mf::Equals(a, b) => Some(Cell { v: t.eq_value(a == b), imp: false }),
                        Mf::Pred(name, _) => match t.pred_rule.get(&**name) {
                            Some(&v) => Some(Cell { v, imp: false }),
                            None => {
                                let k = free_atoms.iter().position(|a| a == m)?;
                                Some(Cell { v: d[fms.len() + k] as u8, imp: false })
                            }
                        },
                        _ => None,
                    }
                };
                let hyps_ok = hyps.iter().all(|h| t.eval(h, &mut leaf).is_some_and(|c| t.is_designated(c.v)));
                if hyps_ok && !t.eval(&concl, &mut leaf).is_some_and(|c| t.is_designated(c.v)) {
                    refuted = Some(d.to_vec());
                    return false;
                }
                true
            });
            let Some(d) = refuted else { continue };
            let mut detail: Vec<String> =
                fms.iter().enumerate().map(|(k, f)| format!("f{} = {}", f, options[k][d[k]].0.v)).collect();
            for (k, a) in free_atoms.iter().enumerate() {
                detail.push(format!("{} = {}", a, d[fms.len() + k]));
            }
            let pattern: Vec<String> = pat.iter().map(|(x, b)| format!("x{} ~ v{}", x, b)).collect();
            detail.extend(pattern);
            let detail = format!("values {}", detail.join(", "));
            let mut tau = None;
            let mut instance = None;
            if realized_only && free_atoms.is_empty() {
                let mut s = ObjectSubstitution::new();
                for (&x, &b) in pat {
                    s.vr.insert(x, b);
                }
                for (k, &f) in fms.iter().enumerate() {
                    if let Some(g) = &options[k][d[k]].1 {
                        s.fm.insert(f, g.clone());
                    }
                }
                if tt_refutes(t, phi, &s) == Ok(true) {
                    instance = object_instantiate(&s, phi).ok();
                    tau = Some(s);
                }
            }
            if realized_only && tau.is_none() {
                // Retry the pass without realizers only if realization failed.
                continue;
            }
            return Verdict::Falsified(Refutation { tau, instance, detail });
        }
    }
    Verdict::Validated(format!(
        "exact: {} identification patterns, {} valuations",
        patterns.len(),
        valuations
    ))
}

fn collect_free_atoms(t: &TruthTableModel, f: &Metaformula, out: &mut Vec<Metaformula>) {
    match f {
        Mf::Pred(name, _) if !t.pred_rule.contains_key(&**name) => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        _ => {
            for c in f.children() {
                collect_free_atoms(t, c, out);
            }
        }
    }
}
