mod common;

use proptest::prelude::*;
use uag_core::equiv::{
    closure_oracle, frobenius_automorphisms, geo_equivalent, mirror_system, mirror_transport_exhaustive, opposite,
    same_quasi_identities_up_to, twist, twist_closure_bijection,
};
use uag_core::term::var_names;
use uag_core::{zoo, EquationSystem, ScalarField, Term};

use common::*;

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("f", vec![a, b])),
            inner.prop_map(|a| Term::app("g", vec![a])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_agrees_with_closure_oracle((a, b) in algebra_pair(1..=3)) {
        let caps = small_caps();
        let Some(v) = within_caps(geo_equivalent(&a, &b, false, &caps)) else { return Ok(()); };
        let Some(w) = within_caps(closure_oracle(&a, &b, 2, &caps)) else { return Ok(()); };
        prop_assert_eq!(v.equivalent, w.is_none());
        if let Some(w) = w {
            prop_assert!(w.replay(&a, &b, &caps).unwrap());
        }
        let back = geo_equivalent(&b, &a, false, &caps).unwrap();
        prop_assert_eq!(back.equivalent, v.equivalent);
        prop_assert!(geo_equivalent(&a, &a, false, &caps).unwrap().equivalent);
    }

    #[test]
    fn equivalence_matches_quasi_identities((a, b) in algebra_pair(1..=2)) {
        let caps = small_caps();
        let Some(v) = within_caps(geo_equivalent(&a, &b, false, &caps)) else { return Ok(()); };
        let Some(q) = within_caps(same_quasi_identities_up_to(&a, &b, 3, 2, 2, &caps)) else { return Ok(()); };
        prop_assert_eq!(v.equivalent, q.agree);
        if let Some(w) = q.witness {
            prop_assert!(w.replay(&a, &b, &caps).unwrap());
        }
    }

    #[test]
    fn opposite_and_mirror_are_involutions(h in small_algebra(), pairs in prop::collection::vec((term_strategy(), term_strategy()), 0..3)) {
        prop_assert_eq!(opposite(&opposite(&h).unwrap()).unwrap(), h.clone());
        let s = EquationSystem::new(var_names(2), pairs).unwrap();
        let m = mirror_system(&s, &h).unwrap();
        prop_assert_eq!(mirror_system(&m, &h).unwrap(), s);
    }

    #[test]
    fn mirror_transport_holds(h in small_algebra(), k in 1usize..=2) {
        if let Some(r) = within_caps(mirror_transport_exhaustive(&h, &var_names(k), &small_caps())) {
            prop_assert!(r.holds, "{:?}", r.failure);
        }
    }
}

#[test]
fn twists_compose() {
    let f8 = ScalarField::galois(2, 3).unwrap();
    let h = zoo::field_algebra(&f8);
    let sigmas = frobenius_automorphisms(&f8).unwrap();
    assert_eq!(sigmas.len(), 3);
    for s in &sigmas {
        for t in &sigmas {
            let twice = twist(&twist(&h, s).unwrap(), t).unwrap();
            assert_eq!(twice, twist(&h, &s.compose(t)).unwrap());
        }
    }
}

#[test]
fn twist_preserves_lattice_shape() {
    let f4 = ScalarField::galois(2, 2).unwrap();
    let caps = uag_core::Caps::default();
    for h in [zoo::field_algebra(&f4), zoo::linear_algebra(&f4)] {
        for s in frobenius_automorphisms(&f4).unwrap() {
            let r = twist_closure_bijection(&h, &s, &var_names(1), &caps).unwrap();
            assert!(r.holds, "{:?}", r.failure);
        }
    }
}
