//! Small algebras used throughout the tests and the command line samples.

use std::sync::Arc;

use crate::algebra::{scale_symbol, FiniteAlgebra, OpSymbol, ScalarField, Signature};
use crate::Caps;

/// `add/2, neg/1, zero/0`.
pub fn group_signature() -> Arc<Signature> {
    Arc::new(
        Signature::new(vec![
            OpSymbol::new("add", 2),
            OpSymbol::new("neg", 1),
            OpSymbol::new("zero", 0),
        ])
        .expect("group signature"),
    )
}

/// `mul/2`, designated as the product.
pub fn semigroup_signature() -> Arc<Signature> {
    Arc::new(
        Signature::new(vec![OpSymbol::new("mul", 2)])
            .and_then(|s| s.with_product("mul"))
            .expect("semigroup signature"),
    )
}

/// `mul/2, one/0` with `mul` as the product.
pub fn monoid_signature() -> Arc<Signature> {
    Arc::new(
        Signature::new(vec![OpSymbol::new("mul", 2), OpSymbol::new("one", 0)])
            .and_then(|s| s.with_product("mul"))
            .expect("monoid signature"),
    )
}

pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

pub fn mod_mul_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect()
}

/// `Z_n` as an additive group.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(format!("Z{n}"), group_signature(), n, |op, args| match op {
        0 => (args[0] + args[1]) % n,
        1 => (n - args[0]) % n,
        _ => 0,
    })
    .expect("cyclic group")
}

pub fn trivial_group() -> FiniteAlgebra {
    cyclic_group(1).renamed("1")
}

/// `Z_2 x Z_2`, encoded as two bits with XOR.
pub fn klein_group() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("V4", group_signature(), 4, |op, args| match op {
        0 => args[0] ^ args[1],
        1 => args[0],
        _ => 0,
    })
    .expect("Klein group")
}

/// Direct product of cyclic groups.
pub fn product_group(orders: &[usize]) -> FiniteAlgebra {
    let factors: Vec<FiniteAlgebra> = orders.iter().map(|&n| cyclic_group(n)).collect();
    let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
    FiniteAlgebra::product(&group_signature(), &refs, &Caps::default()).expect("product group")
}

/// `a * b = a`.
pub fn left_zero_semigroup(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(format!("LZ{n}"), semigroup_signature(), n, |_, args| args[0])
        .expect("left-zero semigroup")
}

/// `a * b = b`.
pub fn right_zero_semigroup(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(format!("RZ{n}"), semigroup_signature(), n, |_, args| args[1])
        .expect("right-zero semigroup")
}

/// All self-maps of `{0,1}` under composition `(f * g)(x) = f(g(x))`.
/// Element `2 f(0) + f(1)`: 0 and 3 are constant, 1 is the identity,
/// 2 the swap.
pub fn transformation_monoid() -> FiniteAlgebra {
    let apply = |f: usize, x: usize| if x == 0 { f >> 1 } else { f & 1 };
    FiniteAlgebra::from_fn("T2", monoid_signature(), 4, |op, args| match op {
        0 => {
            let (f, g) = (args[0], args[1]);
            2 * apply(f, apply(g, 0)) + apply(f, apply(g, 1))
        }
        _ => 1,
    })
    .expect("transformation monoid")
}

/// Upper triangular 2x2 matrices over `F_2` under multiplication; element
/// `4a + 2b + d` stands for `[[a, b], [0, d]]`.
pub fn upper_triangular_monoid() -> FiniteAlgebra {
    let dec = |e: usize| (e >> 2 & 1, e >> 1 & 1, e & 1);
    FiniteAlgebra::from_fn("UT2", monoid_signature(), 8, |op, args| match op {
        0 => {
            let (a, b, d) = dec(args[0]);
            let (a2, b2, d2) = dec(args[1]);
            4 * (a & a2) + 2 * ((a & b2) ^ (b & d2)) + (d & d2)
        }
        _ => 0b101,
    })
    .expect("upper triangular monoid")
}

fn scalar_ops(field: &ScalarField) -> Vec<OpSymbol> {
    (0..field.order()).map(|l| OpSymbol::new(scale_symbol(l), 1)).collect()
}

/// The field as an algebra over itself: `add, neg, zero, one, mul` (the
/// product) and `scale_l` for every element `l`.
pub fn field_algebra(field: &ScalarField) -> FiniteAlgebra {
    let mut ops = vec![
        OpSymbol::new("add", 2),
        OpSymbol::new("neg", 1),
        OpSymbol::new("zero", 0),
        OpSymbol::new("one", 0),
        OpSymbol::new("mul", 2),
    ];
    ops.extend(scalar_ops(field));
    let sig = Signature::new(ops)
        .and_then(|s| s.with_product("mul"))
        .and_then(|s| s.with_scalars(field.clone()))
        .expect("field signature");
    field_tables(field, Arc::new(sig), field.name().to_string())
}

/// The field as a one-dimensional linear space with a distinguished
/// element: `add, neg, zero, one` and `scale_l`.
pub fn linear_algebra(field: &ScalarField) -> FiniteAlgebra {
    let mut ops = vec![
        OpSymbol::new("add", 2),
        OpSymbol::new("neg", 1),
        OpSymbol::new("zero", 0),
        OpSymbol::new("one", 0),
    ];
    ops.extend(scalar_ops(field));
    let sig = Signature::new(ops)
        .and_then(|s| s.with_scalars(field.clone()))
        .expect("linear signature");
    field_tables(field, Arc::new(sig), format!("{}-lin", field.name()))
}

fn field_tables(field: &ScalarField, sig: Arc<Signature>, name: String) -> FiniteAlgebra {
    let q = field.order();
    let neg = |a: usize| (0..q).find(|&b| field.add(a, b) == field.zero()).unwrap();
    let names: Vec<String> = sig.ops().iter().map(|o| o.name.clone()).collect();
    let scalars = sig.scalars().map(|s| s.ops.clone()).unwrap_or_default();
    FiniteAlgebra::from_fn(name, sig.clone(), q, |op, args| {
        if let Some(l) = scalars.iter().position(|&o| o == op) {
            return field.mul(l, args[0]);
        }
        match names[op].as_str() {
            "add" => field.add(args[0], args[1]),
            "neg" => neg(args[0]),
            "zero" => field.zero(),
            "one" => field.one(),
            "mul" => field.mul(args[0], args[1]),
            other => unreachable!("no table for {other}"),
        }
    })
    .expect("field algebra")
}
