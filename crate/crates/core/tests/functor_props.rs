mod common;

use std::sync::Arc;

use proptest::prelude::*;
use uag_core::functors::{
    alpha, beta, build_category, cl_on_morphism, hom_set, rho, tau, AutomorphismSpec, InnerFamily,
};
use uag_core::partition::all_congruences;
use uag_core::term::var_names;
use uag_core::{AffineSpace, FreeAlgebraRep, Relation};

use common::*;

fn free(h: &uag_core::FiniteAlgebra, k: usize) -> Option<Arc<FreeAlgebraRep>> {
    within_caps(FreeAlgebraRep::new(h, &var_names(k), &small_caps())).map(Arc::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tau_inverts_rho(h in small_algebra()) {
        let caps = small_caps();
        let Some(w) = free(&h, 1) else { return Ok(()); };
        let Some(congruences) = within_caps(all_congruences(w.algebra(), 256)) else { return Ok(()); };
        for t in &congruences {
            let Some(r) = within_caps(rho(&w, t, &caps)) else { return Ok(()); };
            prop_assert_eq!(tau(&r, false), Relation::from_partition(t));
        }
    }

    #[test]
    fn beta_is_monotone(h in algebra_with(binary_unary(), 1..=2)) {
        let caps = small_caps();
        let (Some(w1), Some(w2)) = (free(&h, 1), free(&h, 2)) else { return Ok(()); };
        let Some(congruences) = within_caps(all_congruences(w2.algebra(), 64)) else { return Ok(()); };
        let Some(_) = within_caps(hom_set(&w1, &w2, &caps)) else { return Ok(()); };
        let rels: Vec<_> = congruences.iter().map(|t| beta(&w1, &w2, t, &caps).unwrap()).collect();
        for (i, a) in congruences.iter().enumerate() {
            for (j, b) in congruences.iter().enumerate() {
                if a.refines(b) {
                    prop_assert!(rels[i].relation.pairs().all(|(x, y)| rels[j].related(x, y)));
                }
            }
        }
    }

    #[test]
    fn pullback_preserves_closedness(h in algebra_with(binary_unary(), 1..=3)) {
        let caps = small_caps();
        let (Some(w1), Some(w2)) = (free(&h, 1), free(&h, 2)) else { return Ok(()); };
        let s1 = AffineSpace::over(w1.clone(), &h, &caps).unwrap();
        let s2 = AffineSpace::over(w2.clone(), &h, &caps).unwrap();
        let Some(lattice) = within_caps(s1.lattice(&caps)) else { return Ok(()); };
        let Some(arrows) = within_caps(hom_set(&w2, &w1, &caps)) else { return Ok(()); };
        for node in &lattice.nodes {
            for s in &arrows {
                let pulled = cl_on_morphism(s, &node.congruence);
                prop_assert!(s2.is_closed(&pulled).closed);
            }
        }
    }

    #[test]
    fn alpha_composes(h in algebra_with(binary_unary(), 1..=2)) {
        let caps = small_caps();
        let (Some(w1), Some(w2)) = (free(&h, 1), free(&h, 2)) else { return Ok(()); };
        let objects = vec![w1, w2.clone()];
        let swap = AutomorphismSpec::Inner(InnerFamily::transposition(&objects).unwrap());
        let both = AutomorphismSpec::Composite(vec![swap.clone(), AutomorphismSpec::Identity, swap.clone()]);
        let space = AffineSpace::over(w2.clone(), &h, &caps).unwrap();
        let Some(lattice) = within_caps(space.lattice(&caps)) else { return Ok(()); };
        for node in &lattice.nodes {
            let t = &node.congruence;
            let Some(once) = within_caps(alpha(&swap, &w2, t, &caps)) else { return Ok(()); };
            let twice = alpha(&swap, &w2, &once, &caps).unwrap();
            prop_assert_eq!(&alpha(&both, &w2, t, &caps).unwrap(), &twice);
            // the transposition is an involution
            prop_assert_eq!(&twice, t);
        }
    }

    #[test]
    fn category_is_associative_with_a_faithful_skeleton(h in algebra_with(binary_unary(), 1..=2)) {
        let Some(slice) = within_caps(build_category(&h, 1, &small_caps())) else { return Ok(()); };
        prop_assert!(slice.is_associative());
        let class_of = |o: usize| slice.skeleton.iter().position(|c| c.contains(&o)).unwrap();
        for a in 0..slice.objects.len() {
            for b in 0..slice.objects.len() {
                prop_assert_eq!(slice.isomorphic_by_arrows(a, b), class_of(a) == class_of(b));
            }
        }
    }
}
