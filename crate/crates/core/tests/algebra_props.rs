mod common;

use proptest::prelude::*;
use uag_core::{Caps, FiniteAlgebra, Partition};

use common::*;

/// Every map `A -> B`, by brute force.
fn all_maps(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let count = b.size().pow(a.size() as u32);
    (0..count)
        .map(|mut i| {
            (0..a.size())
                .map(|_| {
                    let d = i % b.size();
                    i /= b.size();
                    d
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homs_are_exactly_the_preserving_maps((a, b) in algebra_pair(1..=3)) {
        let homs = a.enumerate_homs(&b, &Caps::default()).unwrap();
        for h in &homs {
            prop_assert!(a.is_homomorphism(&b, &h.map));
        }
        let mut brute: Vec<Vec<usize>> = all_maps(&a, &b).into_iter().filter(|m| a.is_homomorphism(&b, m)).collect();
        brute.sort();
        let found: Vec<Vec<usize>> = homs.into_iter().map(|h| h.map).collect();
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn subalgebra_is_idempotent_and_monotone(
        h in algebra_with(binary_constant(), 1..=4),
        s in prop::collection::vec(0usize..4, 0..3),
        t in prop::collection::vec(0usize..4, 0..3),
    ) {
        let n = h.size();
        let s: Vec<usize> = s.into_iter().map(|e| e % n).collect();
        let t: Vec<usize> = t.into_iter().map(|e| e % n).collect();
        let sub = h.subalgebra_generated(&s).unwrap();
        let again = h.subalgebra_generated(&sub.embedding).unwrap();
        prop_assert_eq!(&again.embedding, &sub.embedding);
        let st: Vec<usize> = s.iter().chain(&t).copied().collect();
        let bigger = h.subalgebra_generated(&st).unwrap();
        prop_assert!(sub.embedding.iter().all(|e| bigger.embedding.contains(e)));
        prop_assert!(s.iter().all(|e| sub.embedding.contains(e)));
    }

    #[test]
    fn first_isomorphism((a, b) in algebra_pair(1..=3)) {
        let caps = Caps::default();
        for h in a.enumerate_homs(&b, &caps).unwrap() {
            let kernel = Partition::from_labels(&h.map);
            let q = a.quotient(&kernel).unwrap();
            let mut image = h.map.clone();
            image.sort_unstable();
            image.dedup();
            let sub = b.subalgebra_generated(&image).unwrap();
            prop_assert_eq!(&sub.embedding, &image);
            prop_assert!(q.algebra.find_isomorphism(&sub.algebra, &caps).unwrap().is_some());
        }
    }

    #[test]
    fn separation_matches_embedding_into_a_power((a, b) in algebra_pair(1..=3)) {
        let caps = Caps::default();
        let sep = a.separates_points(&b, &caps).unwrap();
        // one factor per pair; no pairs gives the one-element empty product
        let k = a.size() * (a.size() - 1) / 2;
        let copies = vec![&b; k];
        let power = FiniteAlgebra::product(b.signature(), &copies, &caps).unwrap();
        let embeds = a
            .enumerate_homs(&power, &caps)
            .unwrap()
            .iter()
            .any(|h| {
                let mut m = h.map.clone();
                m.sort_unstable();
                m.windows(2).all(|w| w[0] != w[1])
            });
        prop_assert_eq!(sep.separated, embeds);
    }
}
