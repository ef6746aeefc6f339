use proptest::prelude::*;

use schemata::bundled;
use schemata::proof::{legitimate_on_proof, subst_proof, transform_proof, verify_proof};
use schemata::schemes::{apply_scheme, check_legitimate, instantiate, is_instance, DvSet, Scheme, Substitution};
use schemata::script::{parse_script, ProofEntry};
use schemata::syntax::{parse_metaformula, Language, Metaformula, Metavariable};
use schemata::transforms::{transform_scheme, TransformSpec};

fn pool() -> Vec<ProofEntry> {
    let mut out = Vec::new();
    for name in ["eqrefl_gen.fol", "identity.fol", "eqrefl_all.fol", "modald.fol"] {
        out.extend(parse_script(bundled::get(name).unwrap()).unwrap().proofs);
    }
    out
}

fn formula() -> impl Strategy<Value = Metaformula> {
    let leaf = prop_oneof![
        (0u32..3).prop_map(Metaformula::fm),
        (0u32..4, 0u32..4).prop_map(|(a, b)| Metaformula::eq(a, b)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Metaformula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Metaformula::imp(a, b)),
            (0u32..4, inner).prop_map(|(x, a)| Metaformula::all(x, a)),
        ]
    })
}

/// A substitution over the metavariables of `s`: variables into x0..x3,
/// formula metavariables to small metaformulas.
fn sigma_for(s: &Scheme, vars: &[u32], fms: &[Metaformula]) -> Substitution {
    let mut sigma = Substitution::identity();
    for m in s.occurring() {
        let k = m.index as usize;
        sigma = if m.is_var() { sigma.var(m.index, vars[k % vars.len()]) } else { sigma.formula(m.index, fms[k % fms.len()].clone()) };
    }
    sigma
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    // Substituted proofs re-verify against the same axioms.
    #[test]
    fn proof_instances_verify(k in 0usize..1000, vars in prop::collection::vec(0u32..4, 4), fms in prop::collection::vec(formula(), 3)) {
        let pool = pool();
        let e = &pool[k % pool.len()];
        let sigma = sigma_for(&e.proof.target, &vars, &fms);
        prop_assume!(legitimate_on_proof(&sigma, &e.proof));
        let q = subst_proof(&sigma, &e.proof).unwrap();
        prop_assert!(verify_proof(&q, &e.axioms).is_ok(), "{}: {:?}", e.proof.name, verify_proof(&q, &e.axioms));
        let want = apply_scheme(&sigma, &e.proof.target);
        prop_assert_eq!(q.target.concl(), want.concl());
    }

    // Transformed proofs re-verify against the transformed axioms.
    #[test]
    fn transformed_proofs_verify(k in 0usize..1000, i in 0u32..4, j in 0u32..4, sym in any::<bool>()) {
        let pool = pool();
        let e = &pool[k % pool.len()];
        let spec = if sym { TransformSpec::sym(i, j) } else { TransformSpec::directed(i, j) };
        if let Ok(q) = transform_proof(spec, &e.proof) {
            let ax = e.axioms.transformed(spec);
            prop_assert!(verify_proof(&q, &ax).is_ok(), "{} {}: {:?}", e.proof.name, spec, verify_proof(&q, &ax));
            prop_assert_eq!(&q.target, &transform_scheme(spec, &e.proof.target).unwrap());
        }
    }

    // Instances are instances, and the relation is transitive.
    #[test]
    fn instance_preorder(phi in formula(), v1 in prop::collection::vec(0u32..4, 4), f1 in prop::collection::vec(formula(), 3),
                         v2 in prop::collection::vec(0u32..4, 4), f2 in prop::collection::vec(formula(), 3)) {
        let a = Scheme::axiom(phi);
        prop_assert!(is_instance(&a, &a).is_some());
        let s1 = sigma_for(&a, &v1, &f1);
        let b = instantiate(&s1, &a, &DvSet::new()).unwrap();
        prop_assert!(is_instance(&b, &a).is_some());
        let s2 = sigma_for(&b, &v2, &f2);
        let c = instantiate(&s2, &b, &DvSet::new()).unwrap();
        prop_assert!(is_instance(&c, &b).is_some());
        prop_assert!(is_instance(&c, &a).is_some());
    }

    // A DV pair blocks exactly the substitutions that make the images share a metavariable.
    #[test]
    fn legitimacy_matches_dv(phi in formula(), vars in prop::collection::vec(0u32..4, 4), fms in prop::collection::vec(formula(), 3)) {
        let occ: Vec<Metavariable> = Scheme::axiom(phi.clone()).occurring().into_iter().collect();
        prop_assume!(occ.len() >= 2);
        let dv = DvSet::from_pairs([(occ[0], occ[1])]);
        let s = Scheme::new(vec![], phi, dv);
        let sigma = sigma_for(&s, &vars, &fms);
        let image = |m: Metavariable| Scheme::axiom(apply_scheme(&sigma, &Scheme::axiom(mv_formula(m))).concl().clone()).occurring();
        let shared = !image(occ[0]).is_disjoint(&image(occ[1]));
        prop_assert_eq!(check_legitimate(&sigma, &s).is_err(), shared);
    }

    // Rendering parses back to the same metaformula.
    #[test]
    fn render_round_trip(phi in formula()) {
        prop_assert_eq!(parse_metaformula(&phi.render(), &Language::empty()).unwrap(), phi);
    }

    // The symmetric transform does not depend on argument order, and i = j is the identity.
    #[test]
    fn symmetric_transform_order(phi in formula(), i in 0u32..4, j in 0u32..4) {
        let s = Scheme::axiom(phi);
        prop_assert_eq!(transform_scheme(TransformSpec::sym(i, j), &s).ok(), transform_scheme(TransformSpec::sym(j, i), &s).ok());
        prop_assert_eq!(transform_scheme(TransformSpec::directed(i, i), &s).unwrap(), s);
    }
}

/// A metavariable as a metaformula mentioning exactly it.
fn mv_formula(m: Metavariable) -> Metaformula {
    if m.is_var() {
        Metaformula::eq(m.index, m.index)
    } else {
        Metaformula::fm(m.index)
    }
}
