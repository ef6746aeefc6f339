use std::collections::BTreeSet;

use schemata::axiomdb::get_system;
use schemata::script::{parse_script, verify_script, Script};

fn load(name: &str) -> Script {
    let path = format!("{}/../../fixtures/{}", env!("CARGO_MANIFEST_DIR"), name);
    let text = std::fs::read_to_string(&path).unwrap();
    let s = parse_script(&text).unwrap_or_else(|e| panic!("{}: {:?}", name, e));
    if let Err((block, e, _)) = verify_script(&s) {
        panic!("{}: block {} line {}: {:?}", name, block, e.line, e.kind);
    }
    s
}

fn labels(system: &str) -> BTreeSet<String> {
    get_system(system).unwrap().into_iter().map(|l| l.to_string()).collect()
}

fn assert_rests_on(s: &Script, name: &str, base: &BTreeSet<String>) {
    let f = s.foundations(name).unwrap();
    assert!(f.is_subset(base), "{} rests on {:?}", name, f.difference(base).collect::<Vec<_>>());
}

#[test]
fn eqrefl_gen() {
    let s = load("eqrefl_gen.fol");
    let base: BTreeSet<String> = ["mp", "gen", "EQrefl"].iter().map(|s| s.to_string()).collect();
    assert_rests_on(&s, "eqrefl-all-gen", &base);
}

#[test]
fn identity_from_minimp() {
    let s = load("identity.fol");
    let base: BTreeSet<String> = ["mp", "minimp"].iter().map(|s| s.to_string()).collect();
    assert_rests_on(&s, "identity", &base);
}

#[test]
fn eqrefl_all_without_gen() {
    let s = load("eqrefl_all.fol");
    let mut base = labels("propcalc");
    base.extend(["EQrefl", "genEq"].iter().map(|s| s.to_string()));
    assert_rests_on(&s, "eqrefl-all-genEq", &base);
    assert!(!s.foundations("eqrefl-all-genEq").unwrap().contains("gen"));
}

#[test]
fn modal_d_from_denot() {
    let s = load("modald.fol");
    let mut base = labels("modK");
    base.extend(["EQrefl", "denot"].iter().map(|s| s.to_string()));
    assert_rests_on(&s, "modalD-denot", &base);
}

#[test]
fn supertruth_certificates() {
    use schemata::transforms::verify_not_supertrue;
    let path = format!("{}/../../fixtures/supercerts.fol", env!("CARGO_MANIFEST_DIR"));
    let s = parse_script(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(s.supercerts.len(), 5);
    for (c, mode) in &s.supercerts {
        verify_not_supertrue(c, *mode).unwrap_or_else(|e| panic!("{}: {}", c.name, e));
    }
}
