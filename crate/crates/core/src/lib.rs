//! Executable universal algebraic geometry over finite algebras.
//!
//! An algebra `H` is given by operation tables over the carrier `{0..n-1}`.
//! For a finite variable set `X` the free algebra of `Var(H)` on `X` is
//! realized as the set of term functions `H^X -> H` ([`FreeAlgebraRep`]),
//! and everything else is built on that representation:
//!
//! * [`galois`]: solution sets `T'`, kernel congruences `A'`, both closures,
//!   lattices of algebraic sets and of `H`-closed congruences;
//! * [`equiv`]: geometric equivalence, quasi-identities, opposite algebras,
//!   mirror maps, scalar twists;
//! * [`functors`]: the relations `beta`, `rho`, `tau`, the action of
//!   category automorphisms on closed congruences, and bounded slices of the
//!   category of algebraic sets;
//! * [`dsl`]: the text format for algebras, fields, systems and
//!   quasi-identities.

pub mod algebra;
pub mod checks;
pub mod dsl;
pub mod equiv;
pub mod error;
pub mod free;
pub mod functors;
pub mod galois;
pub mod linear;
pub mod partition;
pub mod term;
pub mod zoo;

pub use algebra::{FiniteAlgebra, Homomorphism, OpSymbol, ScalarField, Signature};
pub use error::{Error, Result};
pub use free::{FreeAlgebraRep, FreeMorphism};
pub use galois::{AffineSpace, ClosedCongruence, EquationSystem, LatticeReport, PointSet};
pub use partition::{Partition, Relation};
pub use term::{Point, Term};

/// Size bounds for every enumeration in the crate. Exceeding one is an
/// error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Points of an affine space `|H|^|X|`, and carriers of built products.
    pub points: usize,
    /// Elements of a free algebra.
    pub free: usize,
    /// Candidate maps examined by a hom-set enumeration.
    pub homs: usize,
    /// Element pairs scanned when generating a lattice of algebraic sets.
    pub pairs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            points: 4096,
            free: 4096,
            homs: 65536,
            pairs: 1 << 24,
        }
    }
}

/// `base^exp` as `u128`, saturating.
pub(crate) fn pow_u128(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

pub(crate) fn check_cap(what: &'static str, needed: u128, cap: usize) -> Result<usize> {
    if needed > cap as u128 {
        Err(Error::cap(what, needed, cap))
    } else {
        Ok(needed as usize)
    }
}
