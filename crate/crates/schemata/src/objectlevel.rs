//! Object variables and formulas, object-instantiation, the object-like
//! embedding, finite first-order models (with possibly nonstandard equality
//! and quantification domain) and a decision procedure for truth of
//! pure-equality schemes without formula metavariables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::schemes::{DvPair, DvSet, Scheme};
use crate::syntax::{read_formula, Language, Metaformula, Metavariable, Mf, ParseError, TokenReader};

/// A formula over object variables `vN`. Wraps a metaformula tree whose
/// variable indices are object-variable indices and which has no formula
/// metavariables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectFormula(Metaformula);

impl ObjectFormula {
    /// `None` if the tree contains a formula metavariable.
    pub fn from_tree(m: Metaformula) -> Option<Self> {
        (!m.has_formula_mv()).then_some(ObjectFormula(m))
    }

    pub fn tree(&self) -> &Metaformula {
        &self.0
    }

    pub fn eq(a: u32, b: u32) -> Self {
        ObjectFormula(Mf::eq(a, b))
    }

    pub fn pred(name: &str, args: Vec<u32>) -> Self {
        ObjectFormula(Mf::pred(name, args))
    }

    pub fn not(a: ObjectFormula) -> Self {
        ObjectFormula(Mf::not(a.0))
    }

    pub fn imp(a: ObjectFormula, b: ObjectFormula) -> Self {
        ObjectFormula(Mf::imp(a.0, b.0))
    }

    pub fn all(v: u32, a: ObjectFormula) -> Self {
        ObjectFormula(Mf::all(v, a.0))
    }

    pub fn exists(v: u32, a: ObjectFormula) -> Self {
        ObjectFormula(Mf::exists(v, a.0))
    }

    pub fn and(a: ObjectFormula, b: ObjectFormula) -> Self {
        Self::not(Self::imp(a, Self::not(b)))
    }

    pub fn or(a: ObjectFormula, b: ObjectFormula) -> Self {
        ObjectFormula(Mf::or(a.0, b.0))
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    pub fn quantifier_depth(&self) -> usize {
        self.0.quantifier_depth()
    }

    /// Every variable occurring, bound or free.
    pub fn variables(&self) -> BTreeSet<u32> {
        self.0.occurring().into_iter().map(|m| m.index).collect()
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        fn go(m: &Metaformula, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
            let mut see = |v: u32, bound: &Vec<u32>| {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            };
            match m {
                Mf::Fm(_) => {}
                Mf::Equals(a, b) => {
                    see(*a, bound);
                    see(*b, bound);
                }
                Mf::Pred(_, args) => args.iter().for_each(|a| see(*a, bound)),
                Mf::Not(a) => go(a, bound, out),
                Mf::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Mf::Forall(x, a) => {
                    bound.push(*x);
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(&self.0, &mut Vec::new(), &mut out);
        out
    }

    pub fn render(&self) -> String {
        self.0.render_with('v')
    }
}

impl fmt::Display for ObjectFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn parse_object_formula(text: &str, lang: &Language) -> Result<ObjectFormula, ParseError> {
    let mut r = TokenReader::new(text);
    let m = read_formula(&mut r, lang, 'v')?;
    r.finish()?;
    Ok(ObjectFormula(m))
}

/// Hypotheses and conclusion after object-instantiation; no DV data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaWithHyps {
    pub hyps: Vec<ObjectFormula>,
    pub concl: ObjectFormula,
}

impl fmt::Display for FormulaWithHyps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, h) in self.hyps.iter().enumerate() {
            if k > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{}", h)?;
        }
        if !self.hyps.is_empty() {
            write!(f, " => ")?;
        }
        write!(f, "{}", self.concl)
    }
}

/// Object-substitution: variable metavariables to object variables,
/// formula metavariables to object formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObjectSubstitution {
    pub vr: BTreeMap<u32, u32>,
    pub fm: BTreeMap<u32, ObjectFormula>,
}

impl ObjectSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(mut self, x: u32, v: u32) -> Self {
        self.vr.insert(x, v);
        self
    }

    pub fn formula(mut self, f: u32, phi: ObjectFormula) -> Self {
        self.fm.insert(f, phi);
        self
    }

    fn image_vars(&self, m: Metavariable) -> Option<BTreeSet<u32>> {
        if m.is_var() {
            self.vr.get(&m.index).map(|v| [*v].into_iter().collect())
        } else {
            self.fm.get(&m.index).map(|f| f.variables())
        }
    }

    pub fn apply(&self, m: &Metaformula) -> Result<ObjectFormula, ObjectError> {
        fn go(s: &ObjectSubstitution, m: &Metaformula) -> Result<Metaformula, ObjectError> {
            let v = |x: u32| s.vr.get(&x).copied().ok_or(ObjectError::Unmapped(Metavariable::var(x)));
            Ok(match m {
                Mf::Fm(i) => s.fm.get(i).ok_or(ObjectError::Unmapped(Metavariable::fm(*i)))?.0.clone(),
                Mf::Equals(a, b) => Mf::Equals(v(*a)?, v(*b)?),
                Mf::Pred(n, args) => Mf::Pred(n.clone(), args.iter().map(|a| v(*a)).collect::<Result<_, _>>()?),
                Mf::Not(a) => Mf::not(go(s, a)?),
                Mf::Implies(a, b) => Mf::imp(go(s, a)?, go(s, b)?),
                Mf::Forall(x, a) => Mf::all(v(*x)?, go(s, a)?),
            })
        }
        go(self, m).map(ObjectFormula)
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self.fm.iter().map(|(k, v)| format!("f{} := {}", k, v)).collect();
        parts.extend(self.vr.iter().map(|(k, v)| format!("x{} := v{}", k, v)));
        format!("( {} )", parts.join(" ; "))
    }
}

impl fmt::Display for ObjectSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObjectError {
    #[error("metavariable {0} has no image")]
    Unmapped(Metavariable),
    #[error("illegitimate object-substitution: images of DV({}, {}) share v{shared}", .pair.0, .pair.1)]
    IllegitimateSubstitution { pair: DvPair, shared: u32 },
    #[error("variable v{0} is unassigned")]
    UnassignedVariable(u32),
    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
}

/// `Φ^τ`, after checking that DV-paired metavariables get variable-disjoint images.
pub fn object_instantiate(tau: &ObjectSubstitution, phi: &Scheme) -> Result<FormulaWithHyps, ObjectError> {
    for &(a, b) in phi.dv().iter() {
        let ia = tau.image_vars(a).ok_or(ObjectError::Unmapped(a))?;
        let ib = tau.image_vars(b).ok_or(ObjectError::Unmapped(b))?;
        if let Some(&shared) = ia.intersection(&ib).next() {
            return Err(ObjectError::IllegitimateSubstitution { pair: (a, b), shared });
        }
    }
    Ok(FormulaWithHyps {
        hyps: phi.hyps().iter().map(|h| tau.apply(h)).collect::<Result<_, _>>()?,
        concl: tau.apply(phi.concl())?,
    })
}

/// The injection `v_j ↦ x_j`, with all DV conditions among occurring metavariables.
pub fn embed_object_like(f: &FormulaWithHyps) -> Scheme {
    let s = Scheme::new(f.hyps.iter().map(|h| h.0.clone()).collect(), f.concl.0.clone(), DvSet::new());
    let dv = DvSet::complete(&s.occurring());
    s.with_dv(dv)
}

/// Finite structure with an arbitrary binary relation for `≡` and a
/// nonempty quantification domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderModel {
    pub size: usize,
    eq: Vec<bool>,
    pub preds: BTreeMap<String, (usize, BTreeSet<Vec<usize>>)>,
    pub quant: Vec<usize>,
}

impl FirstOrderModel {
    /// True equality, no predicates, full quantification domain.
    pub fn standard(size: usize) -> Self {
        let mut eq = vec![false; size * size];
        for a in 0..size {
            eq[a * size + a] = true;
        }
        FirstOrderModel { size, eq, preds: BTreeMap::new(), quant: (0..size).collect() }
    }

    pub fn with_eq_pairs<I: IntoIterator<Item = (usize, usize)>>(mut self, pairs: I) -> Self {
        self.eq = vec![false; self.size * self.size];
        for (a, b) in pairs {
            if a < self.size && b < self.size {
                self.eq[a * self.size + b] = true;
            }
        }
        self
    }

    pub fn with_total_eq(mut self) -> Self {
        self.eq = vec![true; self.size * self.size];
        self
    }

    pub fn with_pred<I: IntoIterator<Item = Vec<usize>>>(mut self, name: &str, arity: usize, tuples: I) -> Self {
        self.preds.insert(name.to_string(), (arity, tuples.into_iter().collect()));
        self
    }

    pub fn with_quant(mut self, dom: Vec<usize>) -> Self {
        self.quant = dom;
        self
    }

    pub fn eq_holds(&self, a: usize, b: usize) -> bool {
        self.eq[a * self.size + b]
    }

    pub fn eq_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        (0..n * n).filter(|k| self.eq[*k]).map(|k| (k / n, k % n)).collect()
    }

    pub fn pred_holds(&self, name: &str, args: &[usize]) -> bool {
        self.preds.get(name).is_some_and(|(_, t)| t.contains(args))
    }

    pub fn check(&self) -> Result<(), ObjectError> {
        let bad = |m: &str| Err(ObjectError::MalformedModel(m.to_string()));
        if self.size == 0 {
            return bad("empty domain");
        }
        if self.quant.is_empty() || self.quant.iter().any(|&d| d >= self.size) {
            return bad("quantification domain must be a nonempty subset of the domain");
        }
        for (name, (arity, tuples)) in &self.preds {
            if tuples.iter().any(|t| t.len() != *arity || t.iter().any(|&d| d >= self.size)) {
                return Err(ObjectError::MalformedModel(format!("bad tuple for predicate {}", name)));
            }
        }
        Ok(())
    }
}

const UNSET: usize = usize::MAX;

/// Truth-table interpretation of a formula metavariable: the value at an
/// assignment is bit `Σ env[support[k]] · n^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FmTable {
    pub support: Vec<u32>,
    pub bits: u128,
}

/// Evaluates a tree whose variable indices are object variables; formula
/// metavariables are looked up in `fms`.
pub(crate) fn eval_tree(
    m: &FirstOrderModel,
    f: &Metaformula,
    env: &mut Vec<usize>,
    fms: &HashMap<u32, FmTable>,
) -> bool {
    match f {
        Mf::Fm(i) => {
            let t = &fms[i];
            let mut idx = 0usize;
            for &v in t.support.iter().rev() {
                idx = idx * m.size + env[v as usize];
            }
            (t.bits >> idx) & 1 == 1
        }
        Mf::Equals(a, b) => m.eq_holds(env[*a as usize], env[*b as usize]),
        Mf::Pred(n, args) => {
            let vals: Vec<usize> = args.iter().map(|a| env[*a as usize]).collect();
            m.pred_holds(n, &vals)
        }
        Mf::Not(a) => !eval_tree(m, a, env, fms),
        Mf::Implies(a, b) => !eval_tree(m, a, env, fms) || eval_tree(m, b, env, fms),
        Mf::Forall(x, a) => {
            let x = *x as usize;
            let saved = env[x];
            let mut ok = true;
            for &d in &m.quant {
                env[x] = d;
                if !eval_tree(m, a, env, fms) {
                    ok = false;
                    break;
                }
            }
            env[x] = saved;
            ok
        }
    }
}

fn max_var(f: &Metaformula) -> u32 {
    f.occurring().iter().filter(|m| m.is_var()).map(|m| m.index).max().unwrap_or(0)
}

/// Classical evaluation with `≡` read from the model's relation and `∀`
/// ranging over the quantification domain.
pub fn fo_eval(m: &FirstOrderModel, f: &ObjectFormula, asg: &BTreeMap<u32, usize>) -> Result<bool, ObjectError> {
    if let Some(&v) = f.free_vars().iter().find(|v| !asg.contains_key(v)) {
        return Err(ObjectError::UnassignedVariable(v));
    }
    let top = max_var(&f.0).max(asg.keys().copied().max().unwrap_or(0)) as usize;
    let mut env = vec![UNSET; top + 1];
    for (&v, &d) in asg {
        env[v as usize] = d;
    }
    Ok(eval_tree(m, &f.0, &mut env, &HashMap::new()))
}

/// Odometer over `vars` with values in `0..n`.
pub(crate) fn for_each_assignment(vars: &[u32], n: usize, env: &mut Vec<usize>, mut f: impl FnMut(&mut Vec<usize>) -> bool) -> bool {
    for &v in vars {
        env[v as usize] = 0;
    }
    loop {
        if !f(env) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == vars.len() {
                return true;
            }
            let v = vars[k] as usize;
            env[v] += 1;
            if env[v] < n {
                break;
            }
            env[v] = 0;
            k += 1;
        }
    }
}

/// First assignment of the free variables falsifying `f`, if any.
pub fn fo_counter_assignment(m: &FirstOrderModel, f: &ObjectFormula) -> Option<BTreeMap<u32, usize>> {
    let free: Vec<u32> = f.free_vars().into_iter().collect();
    let mut env = vec![UNSET; max_var(&f.0) as usize + 1];
    let mut found = None;
    for_each_assignment(&free, m.size, &mut env, |env| {
        if eval_tree(m, &f.0, env, &HashMap::new()) {
            true
        } else {
            found = Some(free.iter().map(|&v| (v, env[v as usize])).collect());
            false
        }
    });
    found
}

pub fn fo_valid(m: &FirstOrderModel, f: &ObjectFormula) -> bool {
    fo_counter_assignment(m, f).is_none()
}

/// Every object formula of height at most `h` over `vars`, shortest first.
pub fn enumerate_formulas(lang: &Language, vars: &[u32], h: usize) -> Vec<ObjectFormula> {
    let mut by_height: Vec<Vec<ObjectFormula>> = vec![Vec::new()];
    let mut atoms = Vec::new();
    for &a in vars {
        for &b in vars {
            atoms.push(ObjectFormula::eq(a, b));
        }
    }
    for (name, arity) in lang.predicates() {
        let mut idx = vec![0usize; arity];
        loop {
            atoms.push(ObjectFormula::pred(name, idx.iter().map(|&i| vars[i]).collect()));
            let mut j = 0;
            while j < arity {
                idx[j] += 1;
                if idx[j] < vars.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == arity {
                break;
            }
        }
    }
    if h == 0 || vars.is_empty() {
        return Vec::new();
    }
    by_height.push(atoms);
    for k in 2..=h {
        let mut cur = Vec::new();
        for f in &by_height[k - 1] {
            cur.push(ObjectFormula::not(f.clone()));
            for &v in vars {
                cur.push(ObjectFormula::all(v, f.clone()));
            }
        }
        // Implications of height exactly k: one side of height k-1.
        for a in 1..k {
            for b in 1..k {
                if a.max(b) != k - 1 {
                    continue;
                }
                for f in &by_height[a] {
                    for g in &by_height[b] {
                        cur.push(ObjectFormula::imp(f.clone(), g.clone()));
                    }
                }
            }
        }
        by_height.push(cur);
    }
    by_height.into_iter().flatten().collect()
}

/// Restricted growth strings of length `n`: every set partition once.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = if cur.is_empty() { 0 } else { max + 1 };
        for b in 0..=top {
            cur.push(b);
            go(cur, n, max.max(b), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, 0, &mut out);
    out
}

/// Identification patterns: maps from the variable metavariables of Φ to
/// block indices, DV-paired metavariables in distinct blocks.
pub fn identification_patterns(vars: &[u32], dv: &DvSet) -> Vec<BTreeMap<u32, u32>> {
    set_partitions(vars.len())
        .into_iter()
        .filter(|p| {
            dv.iter().all(|&(a, b)| {
                if !(a.is_var() && b.is_var()) {
                    return true;
                }
                let ia = vars.iter().position(|&v| v == a.index);
                let ib = vars.iter().position(|&v| v == b.index);
                match (ia, ib) {
                    (Some(i), Some(j)) => p[i] != p[j],
                    _ => true,
                }
            })
        })
        .map(|p| vars.iter().zip(p).map(|(&v, b)| (v, b as u32)).collect())
        .collect()
}

pub(crate) fn var_mvs(phi: &Scheme) -> Vec<u32> {
    phi.occurring().into_iter().filter(|m| m.is_var()).map(|m| m.index).collect()
}

pub(crate) fn fm_mvs(phi: &Scheme) -> Vec<u32> {
    phi.occurring().into_iter().filter(|m| !m.is_var()).map(|m| m.index).collect()
}

pub(crate) fn rename_vars(f: &Metaformula, pat: &BTreeMap<u32, u32>) -> Metaformula {
    let s = crate::schemes::Substitution { vr: pat.clone(), fm: BTreeMap::new() };
    s.apply(f)
}

/// Bound parameters reported with a validation verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoBound {
    pub patterns: usize,
    pub surrogate_support: usize,
    pub max_support: usize,
    pub interpretations: u64,
}

impl fmt::Display for FoBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} identification patterns, truth-functions over <= {} variables (surrogate support {}), {} interpretations",
            self.patterns, self.max_support, self.surrogate_support, self.interpretations
        )
    }
}

/// An object-instance refuted in the model: hypotheses valid, conclusion
/// false under `assignment`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoWitness {
    pub tau: ObjectSubstitution,
    pub instance: FormulaWithHyps,
    pub assignment: BTreeMap<u32, usize>,
}

impl fmt::Display for FoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let asg: Vec<String> = self.assignment.iter().map(|(v, d)| format!("v{}={}", v, d)).collect();
        write!(f, "{} gives `{}` false at {}", self.tau, self.instance, asg.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoVerdict {
    Validated(FoBound),
    Falsified(FoWitness),
    /// A truth-function refutes the scheme but none found is definable, or
    /// the interpretation space is too large.
    Unresolved(String),
}

/// Re-evaluates a witness: hypotheses valid, conclusion false at the assignment.
pub fn check_fo_witness(m: &FirstOrderModel, phi: &Scheme, w: &FoWitness) -> bool {
    let Ok(inst) = object_instantiate(&w.tau, phi) else { return false };
    if inst != w.instance {
        return false;
    }
    if !inst.hyps.iter().all(|h| fo_valid(m, h)) {
        return false;
    }
    let asg: BTreeMap<u32, usize> = inst
        .concl
        .free_vars()
        .into_iter()
        .map(|v| (v, w.assignment.get(&v).copied().unwrap_or(0)))
        .collect();
    matches!(fo_eval(m, &inst.concl, &asg), Ok(false))
}

const MAX_INTERPRETATIONS: u64 = 1 << 24;
const MAX_REFUTERS_TRIED: usize = 4096;

/// Decides whether every hypotheses-valid object-instance has a valid
/// conclusion in `m`, with formula metavariables replaced by arbitrary
/// truth-functions of the variables they may mention.
///
/// Fresh support variables never change the verdict: they are never bound
/// by the scheme, so fixing their values reduces each interpretation to a
/// truth-function of the remaining support. `surrogate_support` is honored
/// anyway and reported.
pub fn fo_validates_scheme(m: &FirstOrderModel, phi: &Scheme, surrogate_support: usize) -> FoVerdict {
    if let Err(e) = m.check() {
        return FoVerdict::Unresolved(e.to_string());
    }
    let vars = var_mvs(phi);
    let fms = fm_mvs(phi);
    let patterns = identification_patterns(&vars, phi.dv());
    let n = m.size;
    let mut bound = FoBound { patterns: patterns.len(), surrogate_support, max_support: 0, interpretations: 0 };
    let mut tried = 0usize;
    let mut definer = Definer::new(m);
    let mut small_tried = false;
    for pat in &patterns {
        let PatternSetup { all_vars, supports, hyps, concl } = pattern_setup(phi, pat, &fms, surrogate_support);
        let mut widths = Vec::new();
        let mut total: u64 = 1;
        for s in &supports {
            let pts = n.checked_pow(s.len() as u32).filter(|&p| p <= 24);
            let Some(pts) = pts else {
                return FoVerdict::Unresolved(format!(
                    "truth-functions over {} variables exceed the interpretation limit",
                    s.len()
                ));
            };
            bound.max_support = bound.max_support.max(s.len());
            widths.push(pts);
            total = total.saturating_mul(1u64 << pts);
        }
        if total > MAX_INTERPRETATIONS {
            return FoVerdict::Unresolved(format!("{} interpretations exceed the limit {}", total, MAX_INTERPRETATIONS));
        }
        bound.interpretations += total;
        let mut env = vec![UNSET; all_vars.len().max(1)];
        let mut counters = vec![0u64; fms.len()];
        let mut tables: HashMap<u32, FmTable> = HashMap::new();
        loop {
            for (k, &f) in fms.iter().enumerate() {
                tables.insert(f, FmTable { support: supports[k].clone(), bits: counters[k] as u128 });
            }
            let hyps_ok = hyps
                .iter()
                .all(|h| for_each_assignment(&all_vars, n, &mut env, |env| eval_tree(m, h, env, &tables)));
            if hyps_ok {
                let mut bad: Option<Vec<usize>> = None;
                for_each_assignment(&all_vars, n, &mut env, |env| {
                    if eval_tree(m, &concl, env, &tables) {
                        true
                    } else {
                        bad = Some(env.clone());
                        false
                    }
                });
                if let Some(bad_env) = bad {
                    tried += 1;
                    // Prefer a readable witness built from small formulas.
                    if !small_tried {
                        small_tried = true;
                        if let Some(w) = small_witness(m, phi, &patterns, &fms, surrogate_support) {
                            return FoVerdict::Falsified(w);
                        }
                    }
                    if let Some(w) = build_witness(m, phi, pat, &fms, &tables, &all_vars, &bad_env, &mut definer) {
                        return FoVerdict::Falsified(w);
                    }
                    if tried >= MAX_REFUTERS_TRIED {
                        return FoVerdict::Unresolved(format!(
                            "{} refuting truth-functions found, none definable",
                            tried
                        ));
                    }
                }
            }
            // Next interpretation.
            let mut k = 0;
            loop {
                if k == fms.len() {
                    break;
                }
                counters[k] += 1;
                if counters[k] < (1u64 << widths[k]) {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
            if k == fms.len() {
                break;
            }
        }
    }
    if tried > 0 {
        return FoVerdict::Unresolved(format!("{} refuting truth-functions found, none definable", tried));
    }
    FoVerdict::Validated(bound)
}

struct PatternSetup {
    all_vars: Vec<u32>,
    supports: Vec<Vec<u32>>,
    hyps: Vec<Metaformula>,
    concl: Metaformula,
}

/// Variables, formula supports and renamed scheme for one identification pattern.
fn pattern_setup(phi: &Scheme, pat: &BTreeMap<u32, u32>, fms: &[u32], surrogate: usize) -> PatternSetup {
    let blocks = pat.values().copied().max().map_or(0, |b| b + 1);
    let fresh: Vec<u32> = (blocks..blocks + surrogate as u32).collect();
    let all_vars: Vec<u32> = (0..blocks).chain(fresh.iter().copied()).collect();
    let mut supports = Vec::new();
    for &f in fms {
        let fmv = Metavariable::fm(f);
        let banned: BTreeSet<u32> = phi
            .dv()
            .iter()
            .filter_map(|&(a, b)| {
                let other = if a == fmv { b } else if b == fmv { a } else { return None };
                other.is_var().then(|| pat[&other.index])
            })
            .collect();
        supports.push((0..blocks).filter(|b| !banned.contains(b)).chain(fresh.iter().copied()).collect());
    }
    PatternSetup {
        all_vars,
        supports,
        hyps: phi.hyps().iter().map(|h| rename_vars(h, pat)).collect(),
        concl: rename_vars(phi.concl(), pat),
    }
}

const SMALL_SETS: usize = 400;
const SMALL_SIZE: usize = 7;
const SMALL_COMBOS: usize = 200_000;

/// Searches interpretations by short defining formulas, shortest first.
fn small_witness(
    m: &FirstOrderModel,
    phi: &Scheme,
    patterns: &[BTreeMap<u32, u32>],
    fms: &[u32],
    surrogate: usize,
) -> Option<FoWitness> {
    let n = m.size;
    let mut budget = SMALL_COMBOS;
    for pat in patterns {
        let PatternSetup { all_vars, supports, hyps, concl } = pattern_setup(phi, pat, fms, surrogate);
        let spare = all_vars.iter().copied().max().map_or(0, |v| v + 1);
        let cands: Vec<Vec<(u128, ObjectFormula)>> =
            supports.iter().map(|s| small_definables(m, s, spare)).collect();
        if cands.iter().any(|c| c.is_empty()) {
            continue;
        }
        let longest = cands.iter().map(|c| c.len()).max().unwrap_or(1);
        let mut env = vec![UNSET; all_vars.len().max(1)];
        let mut tables: HashMap<u32, FmTable> = HashMap::new();
        // Shell `l`: every index below `l`, some index equal to `l - 1`.
        for l in 1..=longest {
            let mut idx = vec![0usize; fms.len()];
            loop {
                let in_shell = fms.is_empty() || idx.iter().any(|&i| i + 1 == l);
                if in_shell {
                    if budget == 0 {
                        return None;
                    }
                    budget -= 1;
                    for (k, &f) in fms.iter().enumerate() {
                        tables.insert(f, FmTable { support: supports[k].clone(), bits: cands[k][idx[k]].0 });
                    }
                    let hyps_ok = hyps
                        .iter()
                        .all(|h| for_each_assignment(&all_vars, n, &mut env, |env| eval_tree(m, h, env, &tables)));
                    let mut bad: Option<Vec<usize>> = None;
                    if hyps_ok {
                        for_each_assignment(&all_vars, n, &mut env, |env| {
                            let ok = eval_tree(m, &concl, env, &tables);
                            if !ok {
                                bad = Some(env.clone());
                            }
                            ok
                        });
                    }
                    if let Some(bad_env) = bad {
                        let mut tau = ObjectSubstitution::new();
                        for (&x, &b) in pat {
                            tau.vr.insert(x, b);
                        }
                        for (k, &f) in fms.iter().enumerate() {
                            tau.fm.insert(f, cands[k][idx[k]].1.clone());
                        }
                        if let Ok(instance) = object_instantiate(&tau, phi) {
                            let mut assignment: BTreeMap<u32, usize> =
                                all_vars.iter().map(|&v| (v, bad_env[v as usize])).collect();
                            for v in instance.concl.free_vars() {
                                assignment.entry(v).or_insert(0);
                            }
                            let w = FoWitness { tau, instance, assignment };
                            if check_fo_witness(m, phi, &w) {
                                return Some(w);
                            }
                        }
                    }
                }
                if fms.is_empty() {
                    break;
                }
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < l.min(cands[k].len()) {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
            if fms.is_empty() {
                break;
            }
        }
    }
    None
}

/// Subsets of `D^support` definable by short formulas, shortest first. The
/// spare variable may occur bound only.
fn small_definables(m: &FirstOrderModel, support: &[u32], spare: u32) -> Vec<(u128, ObjectFormula)> {
    let n = m.size;
    let k = support.len();
    let Some(target_pts) = n.checked_pow(k as u32).filter(|&p| p <= 128) else { return Vec::new() };
    let mut coords: Vec<u32> = support.to_vec();
    if n.checked_pow(k as u32 + 1).is_some_and(|p| p <= 128) {
        coords.push(spare);
    }
    let c = coords.len();
    let pts = n.pow(c as u32);
    let all: u128 = if pts == 128 { u128::MAX } else { (1u128 << pts) - 1 };
    let points: Vec<Vec<usize>> = (0..pts)
        .map(|p| {
            let mut q = p;
            (0..c)
                .map(|_| {
                    let d = q % n;
                    q /= n;
                    d
                })
                .collect()
        })
        .collect();
    let encode = |v: &[usize]| v.iter().rev().fold(0usize, |a, &d| a * n + d);
    let set_of = |pred: &dyn Fn(&[usize]) -> bool| -> u128 {
        points.iter().enumerate().filter(|(_, v)| pred(v)).fold(0u128, |s, (p, _)| s | 1u128 << p)
    };
    let target_mask: u128 = if target_pts == 128 { u128::MAX } else { (1u128 << target_pts) - 1 };
    let mut seen: HashMap<u128, ()> = HashMap::new();
    let mut levels: Vec<Vec<(u128, ObjectFormula)>> = vec![Vec::new()];
    let mut out: Vec<(u128, ObjectFormula)> = Vec::new();
    let mut admit = |s: u128, f: ObjectFormula, level: &mut Vec<(u128, ObjectFormula)>, out: &mut Vec<_>| {
        if seen.len() >= SMALL_SETS || seen.insert(s, ()).is_some() {
            return;
        }
        // Keep for the result only if the spare coordinate is irrelevant.
        let proj = s & target_mask;
        let mut lifted = 0u128;
        for d in 0..pts / target_pts {
            lifted |= proj << (d * target_pts);
        }
        if lifted == s && (c == k || !f.free_vars().contains(&spare)) {
            out.push((proj, f.clone()));
        }
        level.push((s, f));
    };
    let mut atoms = Vec::new();
    for a in 0..c {
        for b in a..c {
            let s = set_of(&|v: &[usize]| m.eq_holds(v[a], v[b]));
            admit(s, ObjectFormula::eq(coords[a], coords[b]), &mut atoms, &mut out);
            if a != b {
                let s = set_of(&|v: &[usize]| m.eq_holds(v[b], v[a]));
                admit(s, ObjectFormula::eq(coords[b], coords[a]), &mut atoms, &mut out);
            }
        }
    }
    for (name, (arity, _)) in &m.preds {
        let mut idx = vec![0usize; *arity];
        loop {
            let s = set_of(&|v: &[usize]| {
                let args: Vec<usize> = idx.iter().map(|&i| v[i]).collect();
                m.pred_holds(name, &args)
            });
            admit(s, ObjectFormula::pred(name, idx.iter().map(|&i| coords[i]).collect()), &mut atoms, &mut out);
            let mut j = 0;
            while j < *arity {
                idx[j] += 1;
                if idx[j] < c {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == *arity {
                break;
            }
        }
    }
    levels.push(atoms);
    for size in 2..=SMALL_SIZE {
        let mut cur = Vec::new();
        for (s, f) in levels[size - 1].clone() {
            admit(all & !s, ObjectFormula::not(f.clone()), &mut cur, &mut out);
            for a in 0..c {
                let q = set_of(&|v: &[usize]| {
                    m.quant.iter().all(|&d| {
                        let mut w = v.to_vec();
                        w[a] = d;
                        (s >> encode(&w)) & 1 == 1
                    })
                });
                admit(q, ObjectFormula::all(coords[a], f.clone()), &mut cur, &mut out);
            }
        }
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for (s, f) in levels[left].clone() {
                for (t, g) in levels[right].clone() {
                    admit((all & !s) | t, ObjectFormula::imp(f.clone(), g.clone()), &mut cur, &mut out);
                }
            }
        }
        levels.push(cur);
        if levels.iter().map(Vec::len).sum::<usize>() >= SMALL_SETS {
            break;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn build_witness(
    m: &FirstOrderModel,
    phi: &Scheme,
    pat: &BTreeMap<u32, u32>,
    fms: &[u32],
    tables: &HashMap<u32, FmTable>,
    all_vars: &[u32],
    env: &[usize],
    definer: &mut Definer<'_>,
) -> Option<FoWitness> {
    let spare = all_vars.iter().copied().max().map_or(0, |v| v + 1);
    let mut tau = ObjectSubstitution::new();
    for (&x, &b) in pat {
        tau.vr.insert(x, b);
    }
    for f in fms {
        let t = &tables[f];
        tau.fm.insert(*f, definer.define(&t.support, t.bits, spare)?);
    }
    let instance = object_instantiate(&tau, phi).ok()?;
    let mut assignment: BTreeMap<u32, usize> = all_vars.iter().map(|&v| (v, env[v as usize])).collect();
    for v in instance.concl.free_vars() {
        assignment.entry(v).or_insert(0);
    }
    let w = FoWitness { tau, instance, assignment };
    check_fo_witness(m, phi, &w).then_some(w)
}

/// Finds defining formulas for subsets of `D^support`, using one spare
/// variable for inner quantification.
struct Definer<'m> {
    m: &'m FirstOrderModel,
    cache: HashMap<(Vec<u32>, u128), Option<ObjectFormula>>,
}

impl<'m> Definer<'m> {
    fn new(m: &'m FirstOrderModel) -> Self {
        Definer { m, cache: HashMap::new() }
    }

    fn define(&mut self, support: &[u32], bits: u128, spare: u32) -> Option<ObjectFormula> {
        let key = (support.to_vec(), bits);
        if let Some(r) = self.cache.get(&key) {
            return r.clone();
        }
        let r = define_set(self.m, support, bits, spare);
        self.cache.insert(key, r.clone());
        r
    }
}

fn truth() -> ObjectFormula {
    ObjectFormula::imp(ObjectFormula::eq(0, 0), ObjectFormula::eq(0, 0))
}

/// Cells of the definable Boolean algebra over the coordinates, closed
/// under `∃` on each coordinate; the target must be a union of cells.
fn define_set(m: &FirstOrderModel, support: &[u32], bits: u128, spare: u32) -> Option<ObjectFormula> {
    let n = m.size;
    let k = support.len();
    let target_pts = n.checked_pow(k as u32)?;
    let full_target: u128 = if target_pts == 128 { u128::MAX } else { (1u128 << target_pts) - 1 };
    if bits == 0 {
        return Some(ObjectFormula::not(truth()));
    }
    if bits == full_target {
        return Some(truth());
    }
    // Coordinates: support plus the spare variable if it fits.
    let mut coords: Vec<u32> = support.to_vec();
    if n.checked_pow(k as u32 + 1).is_some_and(|p| p <= 128) {
        coords.push(spare);
    }
    let c = coords.len();
    let pts = n.pow(c as u32);
    let all: u128 = if pts == 128 { u128::MAX } else { (1u128 << pts) - 1 };
    let decode = |p: usize| -> Vec<usize> {
        let mut v = Vec::with_capacity(c);
        let mut q = p;
        for _ in 0..c {
            v.push(q % n);
            q /= n;
        }
        v
    };
    let points: Vec<Vec<usize>> = (0..pts).map(decode).collect();
    let encode = |v: &[usize]| v.iter().rev().fold(0usize, |a, &d| a * n + d);
    let set_of = |pred: &dyn Fn(&[usize]) -> bool| -> u128 {
        let mut s = 0u128;
        for (p, v) in points.iter().enumerate() {
            if pred(v) {
                s |= 1u128 << p;
            }
        }
        s
    };
    // Lift the target: independent of the spare coordinate.
    let target = set_of(&|v: &[usize]| {
        let idx = v[..k].iter().rev().fold(0usize, |a, &d| a * n + d);
        (bits >> idx) & 1 == 1
    });
    let mut gens: Vec<(u128, ObjectFormula)> = Vec::new();
    let push = |gens: &mut Vec<(u128, ObjectFormula)>, s: u128, f: ObjectFormula| {
        if s != 0 && s != all && !gens.iter().any(|(t, _)| *t == s) {
            gens.push((s, f));
        }
    };
    for a in 0..c {
        for b in 0..c {
            let s = set_of(&|v: &[usize]| m.eq_holds(v[a], v[b]));
            push(&mut gens, s, ObjectFormula::eq(coords[a], coords[b]));
        }
    }
    for (name, (arity, _)) in &m.preds {
        let mut idx = vec![0usize; *arity];
        loop {
            let s = set_of(&|v: &[usize]| {
                let args: Vec<usize> = idx.iter().map(|&i| v[i]).collect();
                m.pred_holds(name, &args)
            });
            push(&mut gens, s, ObjectFormula::pred(name, idx.iter().map(|&i| coords[i]).collect()));
            let mut j = 0;
            while j < *arity {
                idx[j] += 1;
                if idx[j] < c {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == *arity {
                break;
            }
        }
    }
    // Quick path: a generator or its negation.
    for (s, f) in &gens {
        if *s == target {
            return Some(f.clone());
        }
        if all & !*s == target {
            return Some(ObjectFormula::not(f.clone()));
        }
    }
    let cells_of = |gens: &[(u128, ObjectFormula)]| -> Vec<u128> {
        let mut map: BTreeMap<Vec<bool>, u128> = BTreeMap::new();
        for p in 0..pts {
            let sig: Vec<bool> = gens.iter().map(|(s, _)| (s >> p) & 1 == 1).collect();
            *map.entry(sig).or_insert(0) |= 1u128 << p;
        }
        map.into_values().collect()
    };
    let cell_formula = |gens: &[(u128, ObjectFormula)], cell: u128| -> ObjectFormula {
        let mut cur = all;
        let mut lits: Vec<ObjectFormula> = Vec::new();
        for (s, f) in gens {
            let (ls, lf) = if cell & *s == cell { (*s, f.clone()) } else { (all & !*s, ObjectFormula::not(f.clone())) };
            if cur & ls != cur {
                cur &= ls;
                lits.push(lf);
            }
        }
        lits.into_iter().reduce(ObjectFormula::and).unwrap_or_else(truth)
    };
    loop {
        let cells = cells_of(&gens);
        let mut added = false;
        for &cell in &cells {
            for a in 0..c {
                let s = set_of(&|v: &[usize]| {
                    m.quant.iter().any(|&d| {
                        let mut w = v.to_vec();
                        w[a] = d;
                        (cell >> encode(&w)) & 1 == 1
                    })
                });
                let is_union = cells.iter().all(|&q| q & s == 0 || q & s == q);
                if !is_union {
                    let f = ObjectFormula::exists(coords[a], cell_formula(&gens, cell));
                    push(&mut gens, s, f);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
        if gens.len() > 256 {
            return None;
        }
    }
    let cells = cells_of(&gens);
    if !cells.iter().all(|&q| q & target == 0 || q & target == q) {
        return None;
    }
    cells
        .into_iter()
        .filter(|q| q & target == *q)
        .map(|q| cell_formula(&gens, q))
        .reduce(ObjectFormula::or)
}

/// Outcome of the pure-equality decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqDecision {
    pub truth: bool,
    /// Largest domain size required by the bound `quantifier depth + free variables`.
    pub bound: usize,
    /// Domain sizes actually checked (capped sizes are not exact).
    pub checked_up_to: usize,
    pub exact: bool,
    /// Validity of all identification patterns at each size `1..=checked_up_to`.
    pub per_size: Vec<(usize, bool)>,
    pub counterexample: Option<EqCounterexample>,
}

impl EqDecision {
    /// Whether every size from `min` on (up to the checked bound) is valid.
    pub fn true_from(&self, min: usize) -> bool {
        self.per_size.iter().filter(|(s, _)| *s >= min).all(|(_, ok)| *ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqCounterexample {
    pub instance: ObjectFormula,
    pub size: usize,
    pub assignment: BTreeMap<u32, usize>,
}

impl fmt::Display for EqCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let asg: Vec<String> = self.assignment.iter().map(|(v, d)| format!("v{}={}", v, d)).collect();
        write!(f, "`{}` fails in the {}-element model at {}", self.instance, self.size, asg.join(" "))
    }
}

/// Exact truth of a hypothesis-free scheme over the pure-equality language
/// without formula metavariables.
pub fn decide_eq_truth(phi: &Scheme) -> Result<EqDecision, ObjectError> {
    decide_eq_truth_capped(phi, None)
}

/// As `decide_eq_truth`, with domain sizes capped at `cap`; `exact` reports
/// whether the cap cut below the bound.
pub fn decide_eq_truth_capped(phi: &Scheme, cap: Option<usize>) -> Result<EqDecision, ObjectError> {
    if phi.has_formula_mv() {
        return Err(ObjectError::UnsupportedScheme("formula metavariable present".into()));
    }
    if phi.has_predicate() {
        return Err(ObjectError::UnsupportedScheme("nonlogical predicate present".into()));
    }
    if !phi.hyps().is_empty() {
        return Err(ObjectError::UnsupportedScheme("hypotheses present".into()));
    }
    let vars = var_mvs(phi);
    let instances: Vec<ObjectFormula> = identification_patterns(&vars, phi.dv())
        .iter()
        .map(|p| ObjectFormula(rename_vars(phi.concl(), p)))
        .collect();
    let bound = instances
        .iter()
        .map(|f| (f.quantifier_depth() + f.free_vars().len()).max(1))
        .max()
        .unwrap_or(1);
    let top = cap.map_or(bound, |c| c.min(bound)).max(1);
    let mut per_size = Vec::new();
    let mut counterexample = None;
    for size in 1..=top {
        let m = FirstOrderModel::standard(size);
        let mut ok = true;
        for inst in &instances {
            if let Some(asg) = fo_counter_assignment(&m, inst) {
                ok = false;
                if counterexample.is_none() {
                    counterexample = Some(EqCounterexample { instance: inst.clone(), size, assignment: asg });
                }
                break;
            }
        }
        per_size.push((size, ok));
    }
    Ok(EqDecision {
        truth: per_size.iter().all(|(_, ok)| *ok),
        bound,
        checked_up_to: top,
        exact: top == bound,
        per_size,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::{formula, scheme};

    fn of(s: &str) -> ObjectFormula {
        parse_object_formula(s, &Language::new(&[("P", 1)]).unwrap()).unwrap()
    }

    fn spec_model() -> FirstOrderModel {
        FirstOrderModel::standard(2).with_total_eq().with_pred("P", 1, [vec![0]]).with_quant(vec![0])
    }

    #[test]
    fn object_instances() {
        let s = Scheme::axiom(formula("A. x0 f0"));
        let tau = ObjectSubstitution::new().var(0, 1).formula(0, of("v0 = v2"));
        assert_eq!(object_instantiate(&tau, &s).unwrap().concl, of("A. v1 v0 = v2"));
        let vg = scheme("vacGen").unwrap();
        let tau = ObjectSubstitution::new().var(0, 0).formula(0, of("v0 = v1"));
        assert!(matches!(object_instantiate(&tau, &vg), Err(ObjectError::IllegitimateSubstitution { .. })));
        let sp = scheme("spec").unwrap();
        let tau = ObjectSubstitution::new().var(0, 0).formula(0, of("P v0"));
        assert_eq!(object_instantiate(&tau, &sp).unwrap().concl, of("( A. v0 P v0 -> P v0 )"));
    }

    #[test]
    fn embedding() {
        let e = embed_object_like(&FormulaWithHyps { hyps: vec![], concl: of("v0 = v1") });
        assert_eq!(e.concl(), &formula("x0 = x1"));
        assert_eq!(e.dv().len(), 1);
        let e = embed_object_like(&FormulaWithHyps { hyps: vec![], concl: of("A. v0 v0 = v0") });
        assert!(e.dv().is_empty());
        let e = embed_object_like(&FormulaWithHyps {
            hyps: vec![],
            concl: of("( A. v0 A. v1 v2 = v3 -> A. v1 A. v0 v2 = v3 )"),
        });
        assert_eq!(e.dv().len(), 6);
    }

    #[test]
    fn evaluation() {
        let m = spec_model();
        let f = of("( A. v0 P v0 -> P v0 )");
        let asg = |d| [(0u32, d)].into_iter().collect::<BTreeMap<_, _>>();
        assert_eq!(fo_eval(&m, &f, &asg(1)), Ok(false));
        assert_eq!(fo_eval(&m, &f, &asg(0)), Ok(true));
        let empty = FirstOrderModel::standard(1).with_eq_pairs([]);
        assert_eq!(fo_eval(&empty, &of("v0 = v0"), &asg(0)), Ok(false));
        assert_eq!(fo_eval(&empty, &of("( v0 = v0 -> v0 = v0 )"), &asg(0)), Ok(true));
        assert_eq!(fo_eval(&m, &of("v3 = v3"), &asg(0)), Err(ObjectError::UnassignedVariable(3)));
    }

    #[test]
    fn eqtrans_model() {
        let pairs: Vec<(usize, usize)> =
            (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&p| p != (0, 2) && p != (2, 0)).collect();
        let m = FirstOrderModel::standard(3).with_eq_pairs(pairs);
        let FoVerdict::Falsified(w) = fo_validates_scheme(&m, &scheme("EQtrans").unwrap(), 0) else { panic!() };
        assert!(check_fo_witness(&m, &scheme("EQtrans").unwrap(), &w));
        for l in ["EQrefl", "EQsymm"] {
            assert!(matches!(fo_validates_scheme(&m, &scheme(l).unwrap(), 1), FoVerdict::Validated(_)), "{}", l);
        }
    }

    #[test]
    fn witness_formula_defined() {
        // In the spec model, spec is refuted with f0 := P v0 (or an equivalent).
        let m = spec_model();
        let sp = scheme("spec").unwrap();
        let FoVerdict::Falsified(w) = fo_validates_scheme(&m, &sp, 0) else { panic!() };
        assert!(check_fo_witness(&m, &sp, &w));
        assert_eq!(w.tau.fm[&0], of("P v0"));
    }

    #[test]
    fn partitions() {
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
        let mut dv = DvSet::new();
        dv.insert(Metavariable::var(0), Metavariable::var(1));
        assert_eq!(identification_patterns(&[0, 1], &dv).len(), 1);
    }

    #[test]
    fn eq_decisions() {
        let d = |s: &str| decide_eq_truth(&Scheme::axiom(formula(s))).unwrap();
        assert!(d("A. x0 x0 = x0").truth);
        let mut dv = DvSet::new();
        dv.insert(Metavariable::var(0), Metavariable::var(1));
        let s = Scheme::new(vec![], formula("-. A. x0 x0 = x1"), dv.clone());
        let r = decide_eq_truth(&s).unwrap();
        assert!(!r.truth);
        assert!(r.true_from(2));
        assert_eq!(r.per_size[0], (1, false));
        let denot2 = Scheme::new(vec![], formula("-. A. x0 -. x0 = x1"), dv);
        assert!(decide_eq_truth(&denot2).unwrap().truth);
        assert!(d("( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )").truth);
        assert!(!d("( A. x0 A. x0 x2 = x3 -> A. x1 A. x0 x2 = x3 )").truth);
        assert!(matches!(decide_eq_truth(&scheme("spec").unwrap()), Err(ObjectError::UnsupportedScheme(_))));
    }
}
