//! Metavariables, languages and metaformulas.
//!
//! Concrete syntax is a whitespace-separated token stream in the style of
//! set.mm: `xN` and `fN` are variable and formula metavariables, `=` is
//! equality, `-.` negation, `A. xN` universal quantification and
//! `( A -> B )` implication.  Nonlogical predicates are prefix symbols
//! declared in a [`Language`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// The two disjoint name spaces of metavariables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MvKind {
    Var,
    Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Metavariable {
    pub kind: MvKind,
    pub index: u32,
}

impl Metavariable {
    pub const fn var(index: u32) -> Self {
        Metavariable { kind: MvKind::Var, index }
    }

    pub const fn fm(index: u32) -> Self {
        Metavariable { kind: MvKind::Formula, index }
    }

    pub fn is_var(&self) -> bool {
        self.kind == MvKind::Var
    }

    /// Parses `xN` or `fN`.
    pub fn parse(tok: &str) -> Option<Self> {
        let (kind, rest) = match tok.as_bytes().first()? {
            b'x' => (MvKind::Var, &tok[1..]),
            b'f' => (MvKind::Formula, &tok[1..]),
            _ => return None,
        };
        parse_index(rest).map(|index| Metavariable { kind, index })
    }
}

impl fmt::Display for Metavariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MvKind::Var => write!(f, "x{}", self.index),
            MvKind::Formula => write!(f, "f{}", self.index),
        }
    }
}

/// Decimal index without sign or leading zeros (except `0` itself).
pub(crate) fn parse_index(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

pub(crate) fn is_reserved(tok: &str) -> bool {
    matches!(tok, "=" | "->" | "-." | "A." | "(" | ")")
        || Metavariable::parse(tok).is_some()
        || (tok.starts_with('v') && parse_index(&tok[1..]).is_some())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LanguageError {
    #[error("predicate `{0}` declared twice")]
    Duplicate(String),
    #[error("`{0}` clashes with a reserved token")]
    Reserved(String),
}

/// An ordered list of nonlogical predicates with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Language {
    preds: Vec<(Arc<str>, usize)>,
}

impl Language {
    pub fn empty() -> Self {
        Language::default()
    }

    pub fn new<S: AsRef<str>>(preds: &[(S, usize)]) -> Result<Self, LanguageError> {
        let mut lang = Language::empty();
        for (name, arity) in preds {
            lang.add(name.as_ref(), *arity)?;
        }
        Ok(lang)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<(), LanguageError> {
        if is_reserved(name) || name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(LanguageError::Reserved(name.to_string()));
        }
        if self.arity(name).is_some() {
            return Err(LanguageError::Duplicate(name.to_string()));
        }
        self.preds.push((Arc::from(name), arity));
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.preds.iter().find(|(n, _)| &**n == name).map(|(_, a)| *a)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.preds.iter().map(|(n, a)| (&**n, *a))
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub(crate) fn symbol(&self, name: &str) -> Option<Arc<str>> {
        self.preds.iter().find(|(n, _)| &**n == name).map(|(n, _)| n.clone())
    }

    /// Union of two languages; the first wins on conflicting arities.
    pub fn merged(&self, other: &Language) -> Language {
        let mut out = self.clone();
        for (n, a) in other.predicates() {
            if out.arity(n).is_none() {
                out.preds.push((Arc::from(n), a));
            }
        }
        out
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "language {{")?;
        for (i, (n, a)) in self.preds.iter().enumerate() {
            if i > 0 {
                write!(f, " ;")?;
            }
            write!(f, " {} {}", n, a)?;
        }
        write!(f, " }}")
    }
}

/// Metaformula tree. Variable metavariables are stored by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metaformula {
    Fm(u32),
    Equals(u32, u32),
    Pred(Arc<str>, Vec<u32>),
    Not(Box<Metaformula>),
    Implies(Box<Metaformula>, Box<Metaformula>),
    Forall(u32, Box<Metaformula>),
}

pub use Metaformula as Mf;

impl Metaformula {
    pub fn fm(i: u32) -> Self {
        Mf::Fm(i)
    }

    pub fn eq(a: u32, b: u32) -> Self {
        Mf::Equals(a, b)
    }

    pub fn pred(name: &str, args: Vec<u32>) -> Self {
        Mf::Pred(Arc::from(name), args)
    }

    pub fn not(a: Metaformula) -> Self {
        Mf::Not(Box::new(a))
    }

    pub fn imp(a: Metaformula, b: Metaformula) -> Self {
        Mf::Implies(Box::new(a), Box::new(b))
    }

    pub fn all(x: u32, a: Metaformula) -> Self {
        Mf::Forall(x, Box::new(a))
    }

    /// `¬∀x ¬a`, the usual existential abbreviation.
    pub fn exists(x: u32, a: Metaformula) -> Self {
        Mf::not(Mf::all(x, Mf::not(a)))
    }

    /// `¬a → b`.
    pub fn or(a: Metaformula, b: Metaformula) -> Self {
        Mf::imp(Mf::not(a), b)
    }

    pub fn height(&self) -> usize {
        match self {
            Mf::Fm(_) | Mf::Equals(..) | Mf::Pred(..) => 1,
            Mf::Not(a) | Mf::Forall(_, a) => 1 + a.height(),
            Mf::Implies(a, b) => 1 + a.height().max(b.height()),
        }
    }

    /// Maximum nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Mf::Fm(_) | Mf::Equals(..) | Mf::Pred(..) => 0,
            Mf::Not(a) => a.quantifier_depth(),
            Mf::Forall(_, a) => 1 + a.quantifier_depth(),
            Mf::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
        }
    }

    pub fn occurring(&self) -> BTreeSet<Metavariable> {
        let mut out = BTreeSet::new();
        self.collect_occurring(&mut out);
        out
    }

    pub fn collect_occurring(&self, out: &mut BTreeSet<Metavariable>) {
        match self {
            Mf::Fm(i) => {
                out.insert(Metavariable::fm(*i));
            }
            Mf::Equals(a, b) => {
                out.insert(Metavariable::var(*a));
                out.insert(Metavariable::var(*b));
            }
            Mf::Pred(_, args) => out.extend(args.iter().map(|&a| Metavariable::var(a))),
            Mf::Not(a) => a.collect_occurring(out),
            Mf::Forall(x, a) => {
                out.insert(Metavariable::var(*x));
                a.collect_occurring(out);
            }
            Mf::Implies(a, b) => {
                a.collect_occurring(out);
                b.collect_occurring(out);
            }
        }
    }

    pub fn contains(&self, m: Metavariable) -> bool {
        match self {
            Mf::Fm(i) => m == Metavariable::fm(*i),
            Mf::Equals(a, b) => m.is_var() && (m.index == *a || m.index == *b),
            Mf::Pred(_, args) => m.is_var() && args.contains(&m.index),
            Mf::Not(a) => a.contains(m),
            Mf::Forall(x, a) => (m.is_var() && m.index == *x) || a.contains(m),
            Mf::Implies(a, b) => a.contains(m) || b.contains(m),
        }
    }

    pub fn has_formula_mv(&self) -> bool {
        match self {
            Mf::Fm(_) => true,
            Mf::Equals(..) | Mf::Pred(..) => false,
            Mf::Not(a) | Mf::Forall(_, a) => a.has_formula_mv(),
            Mf::Implies(a, b) => a.has_formula_mv() || b.has_formula_mv(),
        }
    }

    pub fn has_predicate(&self) -> bool {
        match self {
            Mf::Pred(..) => true,
            Mf::Fm(_) | Mf::Equals(..) => false,
            Mf::Not(a) | Mf::Forall(_, a) => a.has_predicate(),
            Mf::Implies(a, b) => a.has_predicate() || b.has_predicate(),
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Mf::Forall(..) => true,
            Mf::Fm(_) | Mf::Equals(..) | Mf::Pred(..) => false,
            Mf::Not(a) => a.has_quantifier(),
            Mf::Implies(a, b) => a.has_quantifier() || b.has_quantifier(),
        }
    }

    pub fn is_implication(&self) -> bool {
        matches!(self, Mf::Implies(..))
    }

    /// Predicate symbols used, with the arities seen.
    pub fn predicates(&self, out: &mut Vec<(Arc<str>, usize)>) {
        match self {
            Mf::Pred(n, args) => {
                if !out.iter().any(|(m, _)| m == n) {
                    out.push((n.clone(), args.len()));
                }
            }
            Mf::Fm(_) | Mf::Equals(..) => {}
            Mf::Not(a) | Mf::Forall(_, a) => a.predicates(out),
            Mf::Implies(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
        }
    }

    /// Immediate children.
    pub fn children(&self) -> Vec<&Metaformula> {
        match self {
            Mf::Fm(_) | Mf::Equals(..) | Mf::Pred(..) => vec![],
            Mf::Not(a) | Mf::Forall(_, a) => vec![a],
            Mf::Implies(a, b) => vec![a, b],
        }
    }

    /// Renders in the concrete token syntax.
    pub fn render(&self) -> String {
        self.render_with('x')
    }

    /// Renders with the given variable prefix (`v` for object formulas).
    pub fn render_with(&self, prefix: char) -> String {
        let mut s = String::new();
        self.render_into(&mut s, prefix);
        s
    }

    fn render_into(&self, s: &mut String, p: char) {
        use std::fmt::Write;
        match self {
            Mf::Fm(i) => {
                let _ = write!(s, "f{}", i);
            }
            Mf::Equals(a, b) => {
                let _ = write!(s, "{p}{} = {p}{}", a, b);
            }
            Mf::Pred(n, args) => {
                s.push_str(n);
                for a in args {
                    let _ = write!(s, " {p}{}", a);
                }
            }
            Mf::Not(a) => {
                s.push_str("-. ");
                a.render_into(s, p);
            }
            Mf::Forall(x, a) => {
                let _ = write!(s, "A. {p}{} ", x);
                a.render_into(s, p);
            }
            Mf::Implies(a, b) => {
                s.push_str("( ");
                a.render_into(s, p);
                s.push_str(" -> ");
                b.render_into(s, p);
                s.push_str(" )");
            }
        }
    }
}

impl fmt::Display for Metaformula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at token {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown predicate `{name}` at token {pos}")]
    UnknownPredicate { pos: usize, name: String },
    #[error("predicate `{name}` expects {expected} argument(s), found {found} (token {pos})")]
    ArityMismatch {
        pos: usize,
        name: String,
        expected: usize,
        found: usize,
    },
}

/// Splits on whitespace, also detaching parentheses glued to other tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let mut rest = word;
        while !rest.is_empty() {
            if let Some(stripped) = rest.strip_prefix('(') {
                out.push("(");
                rest = stripped;
                continue;
            }
            let end = rest.find(['(', ')']).unwrap_or(rest.len());
            if end == 0 {
                out.push(")");
                rest = &rest[1..];
            } else {
                out.push(&rest[..end]);
                rest = &rest[end..];
            }
        }
    }
    out
}

/// Recursive-descent reader over a token slice; shared with the object-level parser.
pub(crate) struct TokenReader<'a> {
    pub toks: Vec<&'a str>,
    pub pos: usize,
}

impl<'a> TokenReader<'a> {
    pub fn new(text: &'a str) -> Self {
        TokenReader { toks: tokenize(text), pos: 0 }
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).copied()
    }

    pub fn next(&mut self) -> Option<&'a str> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    pub fn expect(&mut self, want: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(ParseError::Syntax {
                pos: self.pos - 1,
                msg: format!("expected `{}`, found `{}`", want, t),
            }),
            None => Err(self.err(format!("expected `{}`, found end of input", want))),
        }
    }

    /// Reads a variable token with the given prefix letter (`x` or `v`).
    pub fn var(&mut self, prefix: char) -> Result<u32, ParseError> {
        match self.next() {
            Some(t) if t.starts_with(prefix) => parse_index(&t[1..]).ok_or(ParseError::Syntax {
                pos: self.pos - 1,
                msg: format!("bad variable `{}`", t),
            }),
            Some(t) => Err(ParseError::Syntax {
                pos: self.pos - 1,
                msg: format!("expected a {}N variable, found `{}`", prefix, t),
            }),
            None => Err(self.err(format!("expected a {}N variable, found end of input", prefix))),
        }
    }

    pub fn is_var(&self, prefix: char) -> bool {
        matches!(self.peek(), Some(t) if t.starts_with(prefix) && parse_index(&t[1..]).is_some())
    }

    /// Predicate arguments, with the arity check described in the grammar.
    pub fn pred_args(
        &mut self,
        name: &str,
        arity: usize,
        prefix: char,
        start: usize,
    ) -> Result<Vec<u32>, ParseError> {
        let mut args = Vec::with_capacity(arity);
        while args.len() < arity && self.is_var(prefix) {
            args.push(self.var(prefix)?);
        }
        let mut found = args.len();
        if found == arity {
            let mut look = self.pos;
            while let Some(t) = self.toks.get(look) {
                if t.starts_with(prefix) && parse_index(&t[1..]).is_some() {
                    found += 1;
                    look += 1;
                } else {
                    break;
                }
            }
        }
        if found != arity {
            return Err(ParseError::ArityMismatch {
                pos: start,
                name: name.to_string(),
                expected: arity,
                found,
            });
        }
        Ok(args)
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected trailing token `{}`", t))),
        }
    }
}

/// Reads a formula whose variables carry `prefix`; with `v`, formula
/// metavariables are rejected.
pub(crate) fn read_formula(
    r: &mut TokenReader<'_>,
    lang: &Language,
    prefix: char,
) -> Result<Metaformula, ParseError> {
    let start = r.pos;
    let tok = r.next().ok_or_else(|| r.err("unexpected end of input"))?;
    match tok {
        "-." => Ok(Mf::not(read_formula(r, lang, prefix)?)),
        "A." => {
            let x = r.var(prefix)?;
            Ok(Mf::all(x, read_formula(r, lang, prefix)?))
        }
        "(" => {
            let a = read_formula(r, lang, prefix)?;
            r.expect("->")?;
            let b = read_formula(r, lang, prefix)?;
            r.expect(")")?;
            Ok(Mf::imp(a, b))
        }
        _ => {
            if tok.starts_with(prefix) {
                if let Some(a) = parse_index(&tok[1..]) {
                    r.expect("=")?;
                    let b = r.var(prefix)?;
                    return Ok(Mf::Equals(a, b));
                }
            }
            if prefix == 'x' {
                if let Some(Metavariable { kind: MvKind::Formula, index }) = Metavariable::parse(tok) {
                    return Ok(Mf::Fm(index));
                }
            }
            if is_reserved(tok) {
                return Err(ParseError::Syntax { pos: start, msg: format!("unexpected `{}`", tok) });
            }
            let name = lang.symbol(tok).ok_or(ParseError::UnknownPredicate {
                pos: start,
                name: tok.to_string(),
            })?;
            let arity = lang.arity(tok).unwrap_or(0);
            let args = r.pred_args(tok, arity, prefix, start)?;
            Ok(Mf::Pred(name, args))
        }
    }
}

/// Parses a complete metaformula; trailing tokens are an error.
pub fn parse_metaformula(text: &str, lang: &Language) -> Result<Metaformula, ParseError> {
    let mut r = TokenReader::new(text);
    let m = read_formula(&mut r, lang, 'x')?;
    r.finish()?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Metaformula {
        parse_metaformula(s, &Language::new(&[("P", 1), ("in", 2)]).unwrap()).unwrap()
    }

    #[test]
    fn spec_shape_parses() {
        assert_eq!(p("( A. x0 f0 -> f0 )"), Mf::imp(Mf::all(0, Mf::fm(0)), Mf::fm(0)));
    }

    #[test]
    fn denot_consequent() {
        assert_eq!(
            p("-. A. x1 -. x1 = x0"),
            Mf::not(Mf::all(1, Mf::not(Mf::eq(1, 0))))
        );
    }

    #[test]
    fn arity_checks() {
        let lang = Language::new(&[("P", 1)]).unwrap();
        assert_eq!(parse_metaformula("P x0", &lang).unwrap(), Mf::pred("P", vec![0]));
        assert!(matches!(
            parse_metaformula("P x0 x1", &lang),
            Err(ParseError::ArityMismatch { expected: 1, found: 2, .. })
        ));
        assert!(matches!(
            parse_metaformula("Q x0", &lang),
            Err(ParseError::UnknownPredicate { .. })
        ));
    }

    #[test]
    fn glued_parens() {
        assert_eq!(p("(f0 -> f1)"), p("( f0 -> f1 )"));
    }

    #[test]
    fn heights() {
        assert_eq!(p("f0").height(), 1);
        assert_eq!(p("A. x0 f0").height(), 2);
        assert_eq!(p("( f0 -> -. f1 )").height(), 3);
    }

    #[test]
    fn occurring_sets() {
        let m = p("( x0 = x1 -> ( x1 = x2 -> x0 = x2 ) )");
        let want: BTreeSet<_> = [0, 1, 2].into_iter().map(Metavariable::var).collect();
        assert_eq!(m.occurring(), want);
        let g = p("A. x0 f0");
        assert_eq!(
            g.occurring(),
            [Metavariable::var(0), Metavariable::fm(0)].into_iter().collect()
        );
    }

    #[test]
    fn bad_tokens() {
        let lang = Language::empty();
        assert!(parse_metaformula("x01 = x1", &lang).is_err());
        assert!(parse_metaformula("( f0 f1 )", &lang).is_err());
        assert!(parse_metaformula("f0 f1", &lang).is_err());
        assert!(parse_metaformula("", &lang).is_err());
    }

    #[test]
    fn reserved_predicate_names() {
        assert!(Language::new(&[("x3", 1)]).is_err());
        assert!(Language::new(&[("P", 1), ("P", 2)]).is_err());
    }
}
