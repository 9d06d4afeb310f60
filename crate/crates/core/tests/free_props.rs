mod common;

use std::sync::Arc;

use proptest::prelude::*;
use uag_core::term::var_names;
use uag_core::{FreeAlgebraRep, FreeMorphism};

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witness_terms_evaluate_to_vectors(h in small_algebra(), k in 1usize..=2) {
        let Some(w) = within_caps(FreeAlgebraRep::new(&h, &var_names(k), &small_caps())) else {
            return Ok(());
        };
        for e in 0..w.size() {
            let t = w.term(e);
            for p in 0..w.num_points() {
                prop_assert_eq!(t.eval(&h, &w.point(p)).unwrap(), w.value_at(e, p));
            }
        }
        // |W| <= |H|^(|H|^k)
        let bound = (h.size() as f64).powf((h.size() as f64).powi(k as i32));
        prop_assert!((w.size() as f64) <= bound);
    }

    #[test]
    fn generator_images_extend_uniquely_to_homomorphisms(
        h in algebra_with(binary_unary(), 1..=2),
        imgs in prop::collection::vec(0usize..64, 2),
    ) {
        let caps = small_caps();
        let Some(w1) = within_caps(FreeAlgebraRep::new(&h, &var_names(1), &caps)) else { return Ok(()); };
        let Some(w2) = within_caps(FreeAlgebraRep::new(&h, &var_names(2), &caps)) else { return Ok(()); };
        let (w1, w2) = (Arc::new(w1), Arc::new(w2));
        let images: Vec<usize> = imgs.iter().map(|&i| i % w1.size()).collect();
        let s = FreeMorphism::new(w2.clone(), w1.clone(), images.clone()).unwrap();
        prop_assert_eq!(s.images(), images.as_slice());
        // respects every operation
        let alg1 = w1.algebra();
        let alg2 = w2.algebra();
        prop_assert!(alg2.is_homomorphism(alg1, s.element_map()));
        // and agrees with any homomorphism having the same generator images
        let gens = w2.generators();
        let same: Vec<_> = alg2
            .enumerate_homs(alg1, &caps)
            .unwrap()
            .into_iter()
            .filter(|t| gens.iter().zip(&images).all(|(&g, &i)| t.map[g] == i))
            .collect();
        prop_assert_eq!(same.len(), 1);
        prop_assert_eq!(same[0].map.as_slice(), s.element_map());
    }
}
