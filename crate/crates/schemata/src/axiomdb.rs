//! Built-in catalog of axiom schemes, named subsystems, predicate-axiom
//! generators and the correspondence with set.mm labels.
//!
//! Metavariable convention: `x, y, z` are `x0, x1, x2` and
//! `φ, ψ, χ, θ, τ` are `f0 … f4`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::schemes::{DvSet, Scheme};
use crate::syntax::{parse_metaformula, Language, Metaformula, Metavariable, Mf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bloc {
    Propcalc,
    Modal,
    VacGen,
    Equality,
    Denot,
    Subst,
    AllEq,
    GenEq,
    Variant,
    Predicate,
}

#[derive(Clone, Debug)]
pub struct AxiomEntry {
    pub label: String,
    pub aliases: Vec<String>,
    pub set_mm_label: Option<String>,
    pub scheme: Scheme,
    pub bloc: Bloc,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomDbError {
    #[error("unknown axiom label `{0}`")]
    UnknownLabel(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

/// `(hyps, concl, dv groups)` over the empty language.
fn mk(hyps: &[&str], concl: &str, dv: &[&[&str]]) -> Scheme {
    let lang = Language::empty();
    let parse = |s: &str| parse_metaformula(s, &lang).expect("catalog formula parses");
    let mut d = DvSet::new();
    for group in dv {
        let g: Vec<Metavariable> = group
            .iter()
            .map(|t| Metavariable::parse(t).expect("catalog metavariable"))
            .collect();
        d.insert_group(&g);
    }
    Scheme::new(hyps.iter().map(|h| parse(h)).collect(), parse(concl), d)
}

struct Row {
    label: &'static str,
    aliases: &'static [&'static str],
    set_mm: Option<&'static str>,
    bloc: Bloc,
    hyps: &'static [&'static str],
    concl: &'static str,
    dv: &'static [&'static [&'static str]],
}

const ROWS: &[Row] = &[
    Row { label: "mp", aliases: &[], set_mm: Some("ax-mp"), bloc: Bloc::Propcalc,
          hyps: &["f0", "( f0 -> f1 )"], concl: "f1", dv: &[] },
    Row { label: "minimp", aliases: &[], set_mm: Some("minimp"), bloc: Bloc::Propcalc, hyps: &[],
          concl: "( f0 -> ( ( f1 -> f2 ) -> ( ( ( f3 -> f1 ) -> ( f2 -> f4 ) ) -> ( f1 -> f4 ) ) ) )", dv: &[] },
    Row { label: "peirce", aliases: &["P"], set_mm: Some("peirce"), bloc: Bloc::Propcalc, hyps: &[],
          concl: "( ( ( f0 -> f1 ) -> f0 ) -> f0 )", dv: &[] },
    Row { label: "contrap", aliases: &[], set_mm: Some("con2"), bloc: Bloc::Propcalc, hyps: &[],
          concl: "( ( f0 -> -. f1 ) -> ( f1 -> -. f0 ) )", dv: &[] },
    Row { label: "notelim", aliases: &[], set_mm: Some("pm2.21"), bloc: Bloc::Propcalc, hyps: &[],
          concl: "( -. f0 -> ( f0 -> f1 ) )", dv: &[] },
    Row { label: "gen", aliases: &[], set_mm: Some("ax-gen"), bloc: Bloc::Modal,
          hyps: &["f0"], concl: "A. x0 f0", dv: &[] },
    Row { label: "ALLdistr", aliases: &["modalK", "kripke"], set_mm: Some("ax-4"), bloc: Bloc::Modal, hyps: &[],
          concl: "( A. x0 ( f0 -> f1 ) -> ( A. x0 f0 -> A. x0 f1 ) )", dv: &[] },
    Row { label: "spec", aliases: &["modalT"], set_mm: Some("sp"), bloc: Bloc::Modal, hyps: &[],
          concl: "( A. x0 f0 -> f0 )", dv: &[] },
    Row { label: "modal5", aliases: &[], set_mm: Some("ax-10"), bloc: Bloc::Modal, hyps: &[],
          concl: "( -. A. x0 f0 -> A. x0 -. A. x0 f0 )", dv: &[] },
    Row { label: "vacGen", aliases: &[], set_mm: Some("ax-5"), bloc: Bloc::VacGen, hyps: &[],
          concl: "( f0 -> A. x0 f0 )", dv: &[&["x0", "f0"]] },
    Row { label: "ALLcomm", aliases: &[], set_mm: Some("ax-11"), bloc: Bloc::Modal, hyps: &[],
          concl: "( A. x0 A. x1 f0 -> A. x1 A. x0 f0 )", dv: &[] },
    Row { label: "EQrefl", aliases: &[], set_mm: Some("equid"), bloc: Bloc::Equality, hyps: &[],
          concl: "x0 = x0", dv: &[] },
    Row { label: "EQsymm", aliases: &[], set_mm: Some("equcomi"), bloc: Bloc::Equality, hyps: &[],
          concl: "( x0 = x1 -> x1 = x0 )", dv: &[] },
    Row { label: "EQtrans", aliases: &[], set_mm: Some("equtr"), bloc: Bloc::Equality, hyps: &[],
          concl: "( x0 = x1 -> ( x1 = x2 -> x0 = x2 ) )", dv: &[] },
    Row { label: "denot", aliases: &[], set_mm: Some("bj-denot"), bloc: Bloc::Denot, hyps: &[],
          concl: "( x0 = x0 -> -. A. x1 -. x1 = x0 )", dv: &[&["x0", "x1"]] },
    Row { label: "subst", aliases: &[], set_mm: Some("bj-ax12"), bloc: Bloc::Subst, hyps: &[],
          concl: "A. x0 ( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )", dv: &[&["x0", "x1"], &["x1", "f0"]] },
    Row { label: "ALLeq", aliases: &["ALLEq"], set_mm: Some("ax-c11"), bloc: Bloc::AllEq, hyps: &[],
          concl: "( A. x0 x0 = x1 -> ( A. x0 f0 -> A. x1 f0 ) )", dv: &[] },
    Row { label: "genEq", aliases: &["gen_eq"], set_mm: Some("ax-c9"), bloc: Bloc::GenEq, hyps: &[],
          concl: "( -. A. x0 x0 = x1 -> ( -. A. x0 x0 = x2 -> ( x1 = x2 -> A. x0 x1 = x2 ) ) )", dv: &[] },
    // Variants and propositional companions.
    Row { label: "modalD", aliases: &[], set_mm: Some("bj-modald"), bloc: Bloc::Variant, hyps: &[],
          concl: "( A. x0 -. f0 -> -. A. x0 f0 )", dv: &[] },
    Row { label: "modalB", aliases: &[], set_mm: Some("bj-modalb"), bloc: Bloc::Variant, hyps: &[],
          concl: "( -. f0 -> A. x0 -. A. x0 f0 )", dv: &[] },
    Row { label: "modal4", aliases: &[], set_mm: Some("hba1"), bloc: Bloc::Variant, hyps: &[],
          concl: "( A. x0 f0 -> A. x0 A. x0 f0 )", dv: &[] },
    Row { label: "oneObj", aliases: &["OneObj"], set_mm: Some("ax-c16"), bloc: Bloc::Variant, hyps: &[],
          concl: "( A. x0 x0 = x1 -> ( f0 -> A. x0 f0 ) )", dv: &[&["x0", "x1"]] },
    Row { label: "denot'", aliases: &[], set_mm: Some("ax6v"), bloc: Bloc::Variant, hyps: &[],
          concl: "-. A. x0 -. x0 = x1", dv: &[&["x0", "x1"]] },
    Row { label: "ax-6", aliases: &[], set_mm: Some("ax-6"), bloc: Bloc::Variant, hyps: &[],
          concl: "-. A. x0 -. x0 = x1", dv: &[] },
    Row { label: "EQeucl", aliases: &["ax-eq1"], set_mm: Some("ax-7"), bloc: Bloc::Variant, hyps: &[],
          concl: "( x0 = x1 -> ( x0 = x2 -> x1 = x2 ) )", dv: &[] },
    Row { label: "ax-eq2", aliases: &[], set_mm: Some("equeucl"), bloc: Bloc::Variant, hyps: &[],
          concl: "( x0 = x1 -> ( x2 = x0 -> x2 = x1 ) )", dv: &[] },
    Row { label: "ax-12", aliases: &[], set_mm: Some("ax-12"), bloc: Bloc::Variant, hyps: &[],
          concl: "( x0 = x1 -> ( A. x1 f0 -> A. x0 ( x0 = x1 -> f0 ) ) )", dv: &[] },
    Row { label: "ax12v", aliases: &[], set_mm: Some("ax12v"), bloc: Bloc::Variant, hyps: &[],
          concl: "( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )", dv: &[&["x0", "x1"], &["x1", "f0"]] },
    Row { label: "ax12v2", aliases: &[], set_mm: Some("ax12v2"), bloc: Bloc::Variant, hyps: &[],
          concl: "( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )", dv: &[&["x0", "x1"]] },
    Row { label: "ax-13", aliases: &[], set_mm: Some("ax-13"), bloc: Bloc::Variant, hyps: &[],
          concl: "( -. x0 = x1 -> ( x1 = x2 -> A. x0 x1 = x2 ) )", dv: &[] },
    Row { label: "ax-c11n", aliases: &[], set_mm: Some("ax-c11n"), bloc: Bloc::Variant, hyps: &[],
          concl: "( A. x0 x0 = x1 -> A. x1 x1 = x0 )", dv: &[] },
    Row { label: "ax5ea", aliases: &[], set_mm: Some("ax5ea"), bloc: Bloc::Variant, hyps: &[],
          concl: "( -. A. x0 -. f0 -> A. x0 f0 )", dv: &[&["x0", "f0"]] },
    Row { label: "ax-3", aliases: &[], set_mm: Some("ax-3"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( -. f0 -> -. f1 ) -> ( f1 -> f0 ) )", dv: &[] },
    Row { label: "syl", aliases: &["B'"], set_mm: Some("imim1"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( f0 -> f1 ) -> ( ( f1 -> f2 ) -> ( f0 -> f2 ) ) )", dv: &[] },
    Row { label: "B", aliases: &["syl*"], set_mm: Some("imim2"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( f0 -> f1 ) -> ( ( f2 -> f0 ) -> ( f2 -> f1 ) ) )", dv: &[] },
    Row { label: "C", aliases: &["comm"], set_mm: Some("pm2.04"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( f0 -> ( f1 -> f2 ) ) -> ( f1 -> ( f0 -> f2 ) ) )", dv: &[] },
    Row { label: "K", aliases: &["simp"], set_mm: Some("ax-1"), bloc: Bloc::Variant, hyps: &[],
          concl: "( f0 -> ( f1 -> f0 ) )", dv: &[] },
    Row { label: "I", aliases: &["id"], set_mm: Some("id"), bloc: Bloc::Variant, hyps: &[],
          concl: "( f0 -> f0 )", dv: &[] },
    Row { label: "W", aliases: &["hilbert"], set_mm: Some("pm2.43"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( f0 -> ( f0 -> f1 ) ) -> ( f0 -> f1 ) )", dv: &[] },
    Row { label: "S", aliases: &["frege"], set_mm: Some("ax-2"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( f0 -> ( f1 -> f2 ) ) -> ( ( f0 -> f1 ) -> ( f0 -> f2 ) ) )", dv: &[] },
    Row { label: "excontra", aliases: &[], set_mm: Some("pm2.24"), bloc: Bloc::Variant, hyps: &[],
          concl: "( f0 -> ( -. f0 -> f1 ) )", dv: &[] },
    Row { label: "clavius", aliases: &[], set_mm: Some("pm2.18"), bloc: Bloc::Variant, hyps: &[],
          concl: "( ( -. f0 -> f0 ) -> f0 )", dv: &[] },
    Row { label: "notnotintro", aliases: &[], set_mm: Some("notnot"), bloc: Bloc::Variant, hyps: &[],
          concl: "( f0 -> -. -. f0 )", dv: &[] },
    Row { label: "notnotelim", aliases: &[], set_mm: Some("notnotr"), bloc: Bloc::Variant, hyps: &[],
          concl: "( -. -. f0 -> f0 )", dv: &[] },
];

fn catalog() -> &'static Vec<AxiomEntry> {
    static CATALOG: OnceLock<Vec<AxiomEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        ROWS.iter()
            .map(|r| AxiomEntry {
                label: r.label.to_string(),
                aliases: r.aliases.iter().map(|s| s.to_string()).collect(),
                set_mm_label: r.set_mm.map(str::to_string),
                scheme: mk(r.hyps, r.concl, r.dv),
                bloc: r.bloc,
            })
            .collect()
    })
}

pub fn all_axioms() -> &'static [AxiomEntry] {
    catalog()
}

/// Looks up a label or alias (`ALLEq`, `modalK`, `ax-≡1`, …).
pub fn get_axiom(label: &str) -> Result<&'static AxiomEntry, AxiomDbError> {
    let canon = match label {
        "ax-≡1" => "EQeucl",
        "ax-≡2" => "ax-eq2",
        "gen≡" => "genEq",
        other => other,
    };
    catalog()
        .iter()
        .find(|e| e.label == canon || e.aliases.iter().any(|a| a == canon))
        .ok_or_else(|| AxiomDbError::UnknownLabel(label.to_string()))
}

pub fn scheme(label: &str) -> Result<Scheme, AxiomDbError> {
    get_axiom(label).map(|e| e.scheme.clone())
}

pub const SYSTEM_NAMES: &[&str] = &[
    "minimplcalc", "implcalc", "mincalc", "intuitcalc", "paraccalc", "propcalc", "EQ", "modK",
    "modT", "modS5", "pure", "monadic", "pure_eq", "pure'", "pure_eq'", "T", "T'", "TM", "TMM",
];

/// Label set of a named system; each is its parent plus the edge labels.
pub fn get_system(name: &str) -> Result<BTreeSet<String>, AxiomDbError> {
    fn with(base: &str, extra: &[&str]) -> BTreeSet<String> {
        let mut s = get_system(base).expect("parent system");
        s.extend(extra.iter().map(|l| l.to_string()));
        s
    }
    const EQ: [&str; 3] = ["EQrefl", "EQsymm", "EQtrans"];
    let set = match name {
        "minimplcalc" => ["mp", "minimp"].iter().map(|s| s.to_string()).collect(),
        "implcalc" => with("minimplcalc", &["peirce"]),
        "mincalc" => with("minimplcalc", &["contrap"]),
        "intuitcalc" => with("mincalc", &["notelim"]),
        "paraccalc" => with("mincalc", &["peirce"]),
        "propcalc" => with("intuitcalc", &["peirce"]),
        "EQ" => EQ.iter().map(|s| s.to_string()).collect(),
        "modK" => with("propcalc", &["gen", "ALLdistr"]),
        "modT" => with("modK", &["spec"]),
        "modS5" => with("modT", &["modal5"]),
        "pure" => with("modS5", &["ALLcomm"]),
        "monadic" => with("modS5", &["vacGen"]),
        "pure_eq" | "pure≡" => with("pure", &EQ),
        "pure'" => with("pure", &["vacGen"]),
        "pure_eq'" | "pure≡'" => with("pure_eq", &["vacGen"]),
        "T" => with("modK", &["vacGen", "EQrefl", "EQsymm", "EQtrans", "denot"]),
        "T'" => with("pure_eq'", &["denot"]),
        "TM" => with("T'", &["subst"]),
        "TMM" => with("TM", &["ALLeq", "genEq"]),
        _ => return Err(AxiomDbError::UnknownSystem(name.to_string())),
    };
    Ok(set)
}

/// The lattice edges `(parent, child, labels)`.
pub fn lattice_edges() -> Vec<(&'static str, &'static str, Vec<&'static str>)> {
    vec![
        ("", "minimplcalc", vec!["mp", "minimp"]),
        ("minimplcalc", "implcalc", vec!["peirce"]),
        ("minimplcalc", "mincalc", vec!["contrap"]),
        ("mincalc", "intuitcalc", vec!["notelim"]),
        ("mincalc", "paraccalc", vec!["peirce"]),
        ("implcalc", "paraccalc", vec!["contrap"]),
        ("intuitcalc", "propcalc", vec!["peirce"]),
        ("paraccalc", "propcalc", vec!["notelim"]),
        ("propcalc", "modK", vec!["gen", "ALLdistr"]),
        ("modK", "modT", vec!["spec"]),
        ("modK", "T", vec!["vacGen", "EQrefl", "EQsymm", "EQtrans", "denot"]),
        ("modT", "modS5", vec!["modal5"]),
        ("modS5", "pure", vec!["ALLcomm"]),
        ("modS5", "monadic", vec!["vacGen"]),
        ("pure", "pure_eq", vec!["EQrefl", "EQsymm", "EQtrans"]),
        ("pure", "pure'", vec!["vacGen"]),
        ("monadic", "pure'", vec!["ALLcomm"]),
        ("pure_eq", "pure_eq'", vec!["vacGen"]),
        ("pure'", "pure_eq'", vec!["EQrefl", "EQsymm", "EQtrans"]),
        ("pure_eq'", "T'", vec!["denot"]),
        ("T", "T'", vec!["spec", "modal5", "ALLcomm"]),
        ("T'", "TM", vec!["subst"]),
        ("TM", "TMM", vec!["ALLeq", "genEq"]),
    ]
}

/// `x0 ≡ x1 → (P(…x0…) → P(…x1…))` for each argument position, other
/// positions filled with `x2, x3, …` in order; then `gen_P` if requested.
pub fn predicate_axioms(lang: &Language, with_gen: bool) -> Vec<(String, Scheme)> {
    let mut out = Vec::new();
    for (name, arity) in lang.predicates() {
        for j in 0..arity {
            let args = |v: u32| -> Vec<u32> {
                let mut fill = 2u32..;
                (0..arity).map(|k| if k == j { v } else { fill.next().unwrap() }).collect()
            };
            let f = Mf::imp(
                Mf::eq(0, 1),
                Mf::imp(Mf::pred(name, args(0)), Mf::pred(name, args(1))),
            );
            out.push((format!("ax-{}{}", name, j + 1), Scheme::axiom(f)));
        }
        if with_gen {
            out.push((format!("gen_{}", name), gen_p(name, arity)));
        }
    }
    out
}

/// `¬∀x0 x0≡x1 → (… → (¬∀x0 x0≡xn → (P(x1…xn) → ∀x0 P(x1…xn))))`.
pub fn gen_p(name: &str, arity: usize) -> Scheme {
    let args: Vec<u32> = (1..=arity as u32).collect();
    let atom = Mf::pred(name, args.clone());
    let mut f = Mf::imp(atom.clone(), Mf::all(0, atom));
    for &k in args.iter().rev() {
        f = Mf::imp(Mf::not(Mf::all(0, Mf::eq(0, k))), f);
    }
    Scheme::axiom(f)
}

/// A row of the label correspondence table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelRow {
    pub article: Option<&'static str>,
    pub set_mm: &'static str,
}

pub fn label_map() -> Vec<LabelRow> {
    const T: &[(Option<&str>, &str)] = &[
        (Some("mp"), "ax-mp"), (Some("minimp"), "minimp"), (Some("syl"), "imim1"),
        (Some("B"), "imim2"), (Some("C"), "pm2.04"), (Some("K"), "ax-1"), (Some("I"), "id"),
        (Some("W"), "pm2.43"), (Some("S"), "ax-2"), (Some("peirce"), "peirce"),
        (Some("contrap"), "con2"), (None, "ax-3"), (Some("notelim"), "pm2.21"),
        (Some("excontra"), "pm2.24"), (Some("clavius"), "pm2.18"), (Some("notnotintro"), "notnot"),
        (Some("notnotelim"), "notnotr"), (Some("gen"), "ax-gen"), (Some("ALLdistr"), "ax-4"),
        (Some("spec"), "sp"), (Some("modal5"), "ax-10"), (Some("modalD"), "bj-modald"),
        (Some("modalB"), "bj-modalb"), (Some("modal4"), "hba1"), (Some("ALLcomm"), "ax-11"),
        (Some("vacGen"), "ax-5"), (None, "ax5ea"), (Some("EQrefl"), "equid"),
        (Some("EQsymm"), "equcomi"), (Some("EQtrans"), "equtr"), (Some("EQeucl"), "ax-7"),
        (Some("ax-eq2"), "equeucl"), (None, "ax-6"), (Some("denot'"), "ax6v"),
        (Some("denot"), "bj-denot"), (None, "ax-12"), (Some("subst"), "bj-ax12"),
        (None, "ax-c11n"), (Some("ALLeq"), "ax-c11"), (Some("oneObj"), "ax-c16"),
        (None, "ax-13"), (Some("genEq"), "ax-c9"), (Some("gen_P"), "~ax-c14"),
        (Some("ax-in1"), "ax-8"), (Some("ax-in2"), "ax-9"),
    ];
    T.iter().map(|&(article, set_mm)| LabelRow { article, set_mm }).collect()
}

/// set.mm label for an article label, from the correspondence table.
pub fn set_mm_label(article: &str) -> Option<&'static str> {
    let canon = get_axiom(article).map(|e| e.label.as_str()).unwrap_or(article);
    label_map().into_iter().find(|r| r.article == Some(canon)).map(|r| r.set_mm)
}

/// Labels of the full system (rules included), in display order.
pub fn tmm_labels() -> Vec<&'static str> {
    ROWS.iter().take(18).map(|r| r.label).collect()
}

/// Parses a catalog-style formula; panics on malformed input.
pub fn formula(text: &str) -> Metaformula {
    parse_metaformula(text, &Language::empty()).expect("formula parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_schemes() {
        let s = scheme("subst").unwrap();
        assert_eq!(s.concl(), &formula("A. x0 ( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )"));
        assert_eq!(s.dv().len(), 2);
        assert!(s.dv().contains(Metavariable::var(0), Metavariable::var(1)));
        assert!(s.dv().contains(Metavariable::var(1), Metavariable::fm(0)));
        let o = scheme("oneObj").unwrap();
        assert_eq!(o.concl(), &formula("( A. x0 x0 = x1 -> ( f0 -> A. x0 f0 ) )"));
        assert_eq!(o.dv().len(), 1);
        let g = scheme("gen").unwrap();
        assert_eq!(g.hyps(), &[formula("f0")]);
        assert_eq!(g.concl(), &formula("A. x0 f0"));
        assert!(g.dv().is_empty());
    }

    #[test]
    fn seventeen_core_axioms() {
        let t = tmm_labels();
        assert_eq!(t.len(), 18);
        assert_eq!(get_system("TMM").unwrap(), t.iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn systems() {
        let t = get_system("T").unwrap();
        let mut want = get_system("propcalc").unwrap();
        want.extend(get_system("EQ").unwrap());
        want.extend(["gen", "ALLdistr", "vacGen", "denot"].map(String::from));
        assert_eq!(t, want);
        let tm = get_system("TM").unwrap();
        let mut tmm = get_system("TMM").unwrap();
        tmm.remove("ALLeq");
        tmm.remove("genEq");
        assert_eq!(tm, tmm);
        assert!(get_system("nope").is_err());
    }

    #[test]
    fn lattice_consistent() {
        for (parent, child, labels) in lattice_edges() {
            let mut s = if parent.is_empty() { BTreeSet::new() } else { get_system(parent).unwrap() };
            s.extend(labels.iter().map(|l| l.to_string()));
            assert_eq!(s, get_system(child).unwrap(), "{} -> {}", parent, child);
        }
        let chain = ["propcalc", "modK", "modT", "modS5"];
        for w in chain.windows(2) {
            let a = get_system(w[0]).unwrap();
            let b = get_system(w[1]).unwrap();
            assert!(a.is_subset(&b) && a != b);
        }
    }

    #[test]
    fn membership_predicate_axioms() {
        let lang = Language::new(&[("in", 2)]).unwrap();
        let ax = predicate_axioms(&lang, false);
        let p = |s: &str| parse_metaformula(s, &lang).unwrap();
        assert_eq!(ax.len(), 2);
        assert_eq!(ax[0].1.concl(), &p("( x0 = x1 -> ( in x0 x2 -> in x1 x2 ) )"));
        assert_eq!(ax[1].1.concl(), &p("( x0 = x1 -> ( in x2 x0 -> in x2 x1 ) )"));
        assert_eq!(predicate_axioms(&Language::new(&[("P", 1)]).unwrap(), false).len(), 1);
        assert!(predicate_axioms(&Language::empty(), true).is_empty());
    }

    #[test]
    fn gen_p_nesting() {
        let lang = Language::new(&[("Q", 2)]).unwrap();
        let want = parse_metaformula(
            "( -. A. x0 x0 = x1 -> ( -. A. x0 x0 = x2 -> ( Q x1 x2 -> A. x0 Q x1 x2 ) ) )",
            &lang,
        )
        .unwrap();
        assert_eq!(gen_p("Q", 2).concl(), &want);
    }

    #[test]
    fn label_table() {
        assert_eq!(set_mm_label("spec"), Some("sp"));
        assert_eq!(set_mm_label("vacGen"), Some("ax-5"));
        assert_eq!(set_mm_label("minimp"), Some("minimp"));
        assert_eq!(set_mm_label("ALLEq"), Some("ax-c11"));
        assert_eq!(set_mm_label("genEq"), Some("ax-c9"));
        assert_eq!(set_mm_label("ALLdistr"), Some("ax-4"));
        assert_eq!(set_mm_label("ALLcomm"), Some("ax-11"));
        for e in all_axioms() {
            if let Some(a) = set_mm_label(&e.label) {
                assert_eq!(Some(a), e.set_mm_label.as_deref(), "{}", e.label);
            }
        }
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(get_axiom("modalK").unwrap().label, "ALLdistr");
        assert_eq!(get_axiom("ax-≡2").unwrap().label, "ax-eq2");
        assert!(matches!(get_axiom("bogus"), Err(AxiomDbError::UnknownLabel(_))));
    }
}
