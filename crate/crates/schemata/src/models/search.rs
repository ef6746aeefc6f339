//! Backtracking search for truth tables validating a set of propositional
//! schemes while refuting another.
//!
//! Entries are filled row-major (implication table, then negation), values
//! in increasing order, and every constraint is re-checked on the partial
//! table. Designated sets are taken to be prefixes `{0, …, d-1}`: any table
//! is isomorphic to one of that form, so the search stays complete.

use thiserror::Error;

use crate::objectlevel::fm_mvs;
use crate::schemes::Scheme;
use crate::syntax::{Metaformula, Mf};

use super::table::{EqRule, QuantRule, TruthTableModel};

pub const DEFAULT_MAX_VALUES: u8 = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("budget of {budget} evaluations exhausted after {nodes} nodes")]
    BudgetExhausted { budget: u64, nodes: u64 },
    #[error("{0} truth values exceed the configured maximum {1}")]
    TooManyValues(u8, u8),
    #[error("unsupported scheme: {0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// `None` means the whole space was enumerated without a witness.
    pub table: Option<TruthTableModel>,
    pub evaluations: u64,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(usize),
    Const(u8),
    Not(Box<Node>),
    Imp(Box<Node>, Box<Node>),
}

struct Compiled {
    arity: usize,
    hyps: Vec<Node>,
    concl: Node,
}

fn compile(m: &Metaformula, fms: &[u32]) -> Result<Node, SearchError> {
    Ok(match m {
        Mf::Fm(i) => Node::Leaf(fms.iter().position(|f| f == i).expect("formula metavariable")),
        // Equality is the designated constant 0; quantifiers are ignored.
        Mf::Equals(..) => Node::Const(0),
        Mf::Forall(_, a) => compile(a, fms)?,
        Mf::Not(a) => Node::Not(Box::new(compile(a, fms)?)),
        Mf::Implies(a, b) => Node::Imp(Box::new(compile(a, fms)?), Box::new(compile(b, fms)?)),
        Mf::Pred(n, _) => return Err(SearchError::Unsupported(format!("predicate {} in a searched scheme", n))),
    })
}

fn compile_scheme(s: &Scheme) -> Result<Compiled, SearchError> {
    let fms = fm_mvs(s);
    Ok(Compiled {
        arity: fms.len(),
        hyps: s.hyps().iter().map(|h| compile(h, &fms)).collect::<Result<_, _>>()?,
        concl: compile(s.concl(), &fms)?,
    })
}

struct Partial {
    n: usize,
    /// `n*n` implication entries, then `n` negation entries.
    cells: Vec<Option<u8>>,
}

impl Partial {
    fn eval(&self, node: &Node, vals: &[u8]) -> Option<u8> {
        match node {
            Node::Leaf(k) => Some(vals[*k]),
            Node::Const(c) => Some(*c),
            Node::Not(a) => self.cells[self.n * self.n + self.eval(a, vals)? as usize],
            Node::Imp(a, b) => {
                let x = self.eval(a, vals)? as usize;
                let y = self.eval(b, vals)? as usize;
                self.cells[x * self.n + y]
            }
        }
    }
}

/// Outcome of one scheme against a partial table.
#[derive(PartialEq, Eq)]
enum Status {
    Holds,
    Refuted,
    Open,
}

fn status(p: &Partial, c: &Compiled, designated: usize, evals: &mut u64) -> Status {
    let n = p.n;
    let mut vals = vec![0u8; c.arity];
    let mut open = false;
    loop {
        *evals += 1;
        let mut hyps_known = true;
        let mut hyps_ok = true;
        for h in &c.hyps {
            match p.eval(h, &vals) {
                Some(v) => hyps_ok &= (v as usize) < designated,
                None => hyps_known = false,
            }
        }
        if hyps_ok {
            match p.eval(&c.concl, &vals) {
                Some(v) if (v as usize) >= designated => {
                    if hyps_known {
                        return Status::Refuted;
                    }
                    open = true;
                }
                None => open = true,
                _ => {}
            }
        }
        let mut k = 0;
        loop {
            if k == vals.len() {
                return if open { Status::Open } else { Status::Holds };
            }
            vals[k] += 1;
            if (vals[k] as usize) < n {
                break;
            }
            vals[k] = 0;
            k += 1;
        }
    }
}

pub fn search_truth_table(n: u8, validate: &[Scheme], falsify: &Scheme, budget: u64) -> Result<SearchResult, SearchError> {
    search_truth_table_with_max(n, validate, falsify, budget, DEFAULT_MAX_VALUES)
}

pub fn search_truth_table_with_max(
    n: u8,
    validate: &[Scheme],
    falsify: &Scheme,
    budget: u64,
    max_values: u8,
) -> Result<SearchResult, SearchError> {
    if n > max_values {
        return Err(SearchError::TooManyValues(n, max_values));
    }
    let constraints: Vec<Compiled> = validate.iter().map(compile_scheme).collect::<Result<_, _>>()?;
    let target = compile_scheme(falsify)?;
    let mut st = State { evals: 0, nodes: 0, budget };
    let nu = n as usize;
    // With every value designated nothing can be refuted.
    for designated in 1..nu {
        let mut p = Partial { n: nu, cells: vec![None; nu * nu + nu] };
        if let Some(t) = descend(&mut p, 0, designated, &constraints, &target, &mut st)? {
            return Ok(SearchResult { table: Some(t), evaluations: st.evals, nodes: st.nodes });
        }
    }
    Ok(SearchResult { table: None, evaluations: st.evals, nodes: st.nodes })
}

struct State {
    evals: u64,
    nodes: u64,
    budget: u64,
}

fn descend(
    p: &mut Partial,
    pos: usize,
    designated: usize,
    constraints: &[Compiled],
    target: &Compiled,
    st: &mut State,
) -> Result<Option<TruthTableModel>, SearchError> {
    st.nodes += 1;
    if st.evals > st.budget {
        return Err(SearchError::BudgetExhausted { budget: st.budget, nodes: st.nodes });
    }
    for c in constraints {
        if status(p, c, designated, &mut st.evals) == Status::Refuted {
            return Ok(None);
        }
    }
    // The target must stay refutable: prune once it provably holds.
    match status(p, target, designated, &mut st.evals) {
        Status::Holds => return Ok(None),
        Status::Refuted if pos == p.cells.len() => {
            let n = p.n;
            let cells: Vec<u8> = p.cells.iter().map(|c| c.expect("complete table")).collect();
            return Ok(Some(TruthTableModel {
                value_count: n as u8,
                imp: (0..n).map(|a| cells[a * n..(a + 1) * n].to_vec()).collect(),
                neg: cells[n * n..].to_vec(),
                designated: (0..designated as u8).collect(),
                eq_rule: EqRule::Constant(0),
                pred_rule: Default::default(),
                quant: QuantRule::Ignore,
            }));
        }
        _ => {}
    }
    if pos == p.cells.len() {
        return Ok(None);
    }
    for v in 0..p.n as u8 {
        p.cells[pos] = Some(v);
        if let Some(t) = descend(p, pos + 1, designated, constraints, target, st)? {
            return Ok(Some(t));
        }
    }
    p.cells[pos] = None;
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiomdb::scheme;
    use crate::models::table::tt_validates;

    fn set(labels: &[&str]) -> Vec<Scheme> {
        labels.iter().map(|l| scheme(l).unwrap()).collect()
    }

    #[test]
    fn two_values_none() {
        let r = search_truth_table(2, &set(&["mp", "K", "I"]), &scheme("minimp").unwrap(), 1_000_000).unwrap();
        assert!(r.table.is_none());
    }

    #[test]
    fn one_value_none() {
        let r = search_truth_table(1, &set(&["mp"]), &scheme("K").unwrap(), 1000).unwrap();
        assert!(r.table.is_none());
    }

    #[test]
    fn three_values_peirce() {
        let r = search_truth_table(3, &set(&["mp", "K", "S"]), &scheme("peirce").unwrap(), 10_000_000).unwrap();
        let t = r.table.expect("a Goedel-like table exists");
        assert!(tt_validates(&t, &scheme("K").unwrap()).is_validated());
        assert!(tt_validates(&t, &scheme("peirce").unwrap()).is_falsified());
    }

    #[test]
    fn budget() {
        let r = search_truth_table(3, &set(&["mp", "K", "S"]), &scheme("peirce").unwrap(), 10);
        assert!(matches!(r, Err(SearchError::BudgetExhausted { .. })));
        assert!(matches!(search_truth_table(6, &[], &scheme("K").unwrap(), 10), Err(SearchError::TooManyValues(6, 5))));
    }
}
