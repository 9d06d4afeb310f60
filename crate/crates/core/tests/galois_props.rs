mod common;

use proptest::prelude::*;
use uag_core::checks::{galois_laws, membership_agreement};
use uag_core::linear::LinearSpace;
use uag_core::term::var_names;
use uag_core::{zoo, AffineSpace, Caps, PointSet, ScalarField};

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn galois_laws_hold(h in small_algebra(), k in 1usize..=2, seed in any::<u64>()) {
        if let Some(r) = within_caps(galois_laws(&h, k, 30, seed, &small_caps())) {
            prop_assert!(r.passed(), "{:?}", r.first_failure);
        }
    }

    #[test]
    fn membership_agrees_with_closure(h in small_algebra(), k in 1usize..=2, seed in any::<u64>()) {
        if let Some(r) = within_caps(membership_agreement(&h, k, 30, seed, &small_caps())) {
            prop_assert!(r.passed(), "{:?}", r.first_failure);
        }
    }

    #[test]
    fn lattice_is_anti_isomorphic(h in small_algebra(), k in 1usize..=2) {
        let caps = small_caps();
        let Some(space) = within_caps(AffineSpace::new(&h, &var_names(k), &caps)) else { return Ok(()); };
        let Some(lattice) = within_caps(space.lattice(&caps)) else { return Ok(()); };
        prop_assert!(space.lattice_duality_holds(&lattice));
        // the empty set's kernel is everything
        let empty = PointSet::empty(space.num_points());
        prop_assert_eq!(space.kernel(&empty).num_blocks(), 1);
    }

    #[test]
    fn linear_and_table_closures_agree(mask in 0usize..(1 << 9), pairs in prop::collection::vec((0usize..1000, 0usize..1000), 0..3)) {
        let f3 = ScalarField::galois(3, 1).unwrap();
        let h = zoo::linear_algebra(&f3);
        let caps = Caps::default();
        let vars = var_names(2);
        let table = AffineSpace::new(&h, &vars, &caps).unwrap();
        let linear = LinearSpace::new(&h, &vars, &caps).unwrap();
        let n = table.num_elements();
        let a = PointSet::from_indices(9, (0..9).filter(|p| mask >> p & 1 == 1));
        prop_assert_eq!(table.closure_of_points(&a), linear.closure_of_points(&a));
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(e, f)| (e % n, f % n)).collect();
        let vecs: Vec<_> = pairs
            .iter()
            .map(|&(e, f)| {
                let t = table.free();
                (linear.eval(&t.term(e)).unwrap(), linear.eval(&t.term(f)).unwrap())
            })
            .collect();
        prop_assert_eq!(table.solve_pairs(&pairs), linear.solve_pairs(&vecs));
        let kernel = table.kernel(&a);
        let ideal = linear.ideal(&a);
        for (&(e, f), (u, v)) in pairs.iter().zip(&vecs) {
            prop_assert_eq!(kernel.same(e, f), linear.identifies(&ideal, u, v));
        }
    }
}
