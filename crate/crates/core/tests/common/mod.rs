//! Random small algebras shared by the property tests.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use uag_core::{Caps, Error, FiniteAlgebra, OpSymbol, Signature};

/// `f/2, g/1`, with `f` as the product.
pub fn binary_unary() -> Arc<Signature> {
    Arc::new(
        Signature::new(vec![OpSymbol::new("f", 2), OpSymbol::new("g", 1)])
            .and_then(|s| s.with_product("f"))
            .unwrap(),
    )
}

/// `f/2, c/0`.
pub fn binary_constant() -> Arc<Signature> {
    Arc::new(Signature::new(vec![OpSymbol::new("f", 2), OpSymbol::new("c", 0)]).unwrap())
}

pub fn algebra_with(sig: Arc<Signature>, sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = FiniteAlgebra> {
    sizes.prop_flat_map(move |n| {
        let sig = sig.clone();
        let tables: Vec<_> = sig
            .ops()
            .iter()
            .map(|op| prop::collection::vec(0..n, n.pow(op.arity as u32)))
            .collect();
        tables.prop_map(move |t| FiniteAlgebra::new("R", sig.clone(), n, t).unwrap())
    })
}

pub fn small_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    algebra_with(binary_unary(), 1..=3)
}

/// Two algebras of one signature.
pub fn algebra_pair(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (FiniteAlgebra, FiniteAlgebra)> {
    (
        algebra_with(binary_unary(), sizes.clone()),
        algebra_with(binary_unary(), sizes),
    )
}

/// `None` on an exceeded cap, so a property can skip that instance.
pub fn within_caps<T>(r: Result<T, Error>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) if e.is_cap_exceeded() => None,
        Err(e) => panic!("unexpected error: {e}"),
    }
}

pub fn small_caps() -> Caps {
    Caps {
        free: 512,
        ..Caps::default()
    }
}
