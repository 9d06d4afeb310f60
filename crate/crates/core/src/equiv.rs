//! Geometric equivalence, quasi-identities, opposite algebras, mirror maps
//! and scalar twists.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{scale_symbol, FiniteAlgebra, ScalarField, Separation};
use crate::error::{Error, Result};
use crate::free::FreeAlgebraRep;
use crate::galois::{membership, AffineSpace, EquationSystem, Membership, PointSet};
use crate::partition::Partition;
use crate::term::{var_names, Term};
use crate::Caps;

/// `p_1 = q_1 & ... & p_m = q_m => l = r` over a variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuasiIdentity {
    pub vars: Vec<String>,
    pub premises: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

impl QuasiIdentity {
    pub fn new(
        vars: Vec<String>,
        premises: Vec<(Term, Term)>,
        conclusion: (Term, Term),
    ) -> Result<QuasiIdentity> {
        let sys = EquationSystem::new(vars, premises)?;
        EquationSystem::new(sys.vars.clone(), vec![conclusion.clone()])?;
        Ok(QuasiIdentity {
            vars: sys.vars,
            premises: sys.pairs,
            conclusion,
        })
    }

    pub fn premise_system(&self) -> EquationSystem {
        EquationSystem {
            vars: self.vars.clone(),
            pairs: self.premises.clone(),
        }
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, r)) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{l} = {r}")?;
        }
        if !self.premises.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "=> {} = {}", self.conclusion.0, self.conclusion.1)
    }
}

pub fn quasi_identity_holds(q: &QuasiIdentity, h: &FiniteAlgebra, caps: &Caps) -> Result<Membership> {
    membership(h, &q.vars, &q.premise_system(), &q.conclusion.0, &q.conclusion.1, caps)
}

/// An automorphism of the scalar field, as a permutation of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldAutomorphism {
    perm: Vec<usize>,
}

impl FieldAutomorphism {
    pub fn new(field: &ScalarField, perm: Vec<usize>) -> Result<FieldAutomorphism> {
        let q = field.order();
        let mut seen = vec![false; q];
        if perm.len() != q || perm.iter().any(|&x| x >= q || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::IllFormedAutomorphism("not a permutation of the field".into()));
        }
        for a in 0..q {
            for b in 0..q {
                if perm[field.add(a, b)] != field.add(perm[a], perm[b])
                    || perm[field.mul(a, b)] != field.mul(perm[a], perm[b])
                {
                    return Err(Error::IllFormedAutomorphism(format!(
                        "field operations not preserved at ({a},{b})"
                    )));
                }
            }
        }
        Ok(FieldAutomorphism { perm })
    }

    pub fn identity(field: &ScalarField) -> FieldAutomorphism {
        FieldAutomorphism {
            perm: (0..field.order()).collect(),
        }
    }

    /// `t -> t^(p^i)`.
    pub fn frobenius_power(field: &ScalarField, i: usize) -> Result<FieldAutomorphism> {
        let e = field.characteristic().pow(i as u32);
        let perm = (0..field.order()).map(|t| field.pow(t, e)).collect();
        FieldAutomorphism::new(field, perm)
    }

    pub fn apply(&self, lambda: usize) -> usize {
        self.perm[lambda]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> FieldAutomorphism {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        FieldAutomorphism { perm: inv }
    }

    /// `self . other`.
    pub fn compose(&self, other: &FieldAutomorphism) -> FieldAutomorphism {
        FieldAutomorphism {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
        }
    }
}

/// The `k` powers of Frobenius of `F_{p^k}`, each verified to preserve the
/// field tables.
pub fn frobenius_automorphisms(field: &ScalarField) -> Result<Vec<FieldAutomorphism>> {
    let autos = (0..field.degree())
        .map(|i| FieldAutomorphism::frobenius_power(field, i))
        .collect::<Result<Vec<_>>>()?;
    let distinct: HashSet<&FieldAutomorphism> = autos.iter().collect();
    if distinct.len() != field.degree() {
        return Err(Error::InvalidField("Frobenius powers are not distinct".into()));
    }
    Ok(autos)
}

/// The algebra with the designated product reversed: `a * b := b . a`.
pub fn opposite(h: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let prod = h.signature().product().ok_or(Error::NoReversibleProduct)?;
    FiniteAlgebra::from_fn(
        format!("{}^op", h.name()),
        h.signature().clone(),
        h.size(),
        |op, args| {
            if op == prod {
                h.apply(op, &[args[1], args[0]])
            } else {
                h.apply(op, args)
            }
        },
    )
}

/// Swaps the operands of every occurrence of `product`.
pub fn mirror_term(t: &Term, product: &str) -> Term {
    t.map_apps(&mut |s, mut args| {
        if s == product && args.len() == 2 {
            args.swap(0, 1);
        }
        Term::App(s.to_string(), args)
    })
}

pub fn mirror_system(system: &EquationSystem, h: &FiniteAlgebra) -> Result<EquationSystem> {
    let sig = h.signature();
    let prod = sig.product().ok_or(Error::NoReversibleProduct)?;
    let name = &sig.ops()[prod].name;
    Ok(EquationSystem {
        vars: system.vars.clone(),
        pairs: system
            .pairs
            .iter()
            .map(|(l, r)| (mirror_term(l, name), mirror_term(r, name)))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub holds: bool,
    pub systems_checked: usize,
    pub failure: Option<String>,
}

/// Element map `W_H(X) -> W_{H^op}(X)` sending each element to the
/// mirrored witness term.
fn mirror_map(s: &AffineSpace, sop: &AffineSpace, product: &str) -> Result<Vec<usize>> {
    let w = s.free();
    (0..w.size())
        .map(|e| sop.element_of(&mirror_term(&w.term(e), product)))
        .collect()
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&m| m < map.len() && !std::mem::replace(&mut seen[m], true))
}

/// Whether the closure of `T` under `H` matches the closure of the mirrored
/// system under `H^op`: equal solution sets, and blocks corresponding under
/// the mirror map on canonical terms.
pub fn mirror_closure_transport(
    h: &FiniteAlgebra,
    vars: &[String],
    system: &EquationSystem,
    caps: &Caps,
) -> Result<TransportReport> {
    let ctx = MirrorContext::new(h, vars, caps)?;
    ctx.check(system)
}

struct MirrorContext {
    s: AffineSpace,
    sop: AffineSpace,
    h: FiniteAlgebra,
    map: Vec<usize>,
}

impl MirrorContext {
    fn new(h: &FiniteAlgebra, vars: &[String], caps: &Caps) -> Result<MirrorContext> {
        let hop = opposite(h)?;
        let prod = &h.signature().ops()[h.signature().product().expect("checked by opposite")].name;
        let s = AffineSpace::new(h, vars, caps)?;
        let sop = AffineSpace::new(&hop, vars, caps)?;
        let map = mirror_map(&s, &sop, prod)?;
        Ok(MirrorContext {
            s,
            sop,
            h: h.clone(),
            map,
        })
    }

    fn check(&self, system: &EquationSystem) -> Result<TransportReport> {
        let fail = |m: String| TransportReport {
            holds: false,
            systems_checked: 1,
            failure: Some(m),
        };
        if self.s.free().size() != self.sop.free().size() || !is_permutation(&self.map) {
            return Ok(fail("mirror map is not a bijection of free algebras".into()));
        }
        let c = self.s.closure_of_system(system)?;
        let cop = self.sop.closure_of_system(&mirror_system(system, &self.h)?)?;
        if c.points != cop.points {
            return Ok(fail(format!("solution sets differ for {system}")));
        }
        if c.partition.permuted(&self.map) != cop.partition {
            return Ok(fail(format!("closures do not correspond for {system}")));
        }
        Ok(TransportReport {
            holds: true,
            systems_checked: 1,
            failure: None,
        })
    }
}

/// The transport check for every single-equation system between canonical
/// terms of `W(X)`, plus the empty system.
pub fn mirror_transport_exhaustive(
    h: &FiniteAlgebra,
    vars: &[String],
    caps: &Caps,
) -> Result<TransportReport> {
    let ctx = MirrorContext::new(h, vars, caps)?;
    let w = ctx.s.free().clone();
    let mut systems = vec![EquationSystem::empty(vars.to_vec())];
    for e in 0..w.size() {
        for f in e + 1..w.size() {
            systems.push(EquationSystem {
                vars: vars.to_vec(),
                pairs: vec![(w.term(e), w.term(f))],
            });
        }
    }
    for (i, sys) in systems.iter().enumerate() {
        let r = ctx.check(sys)?;
        if !r.holds {
            return Ok(TransportReport {
                systems_checked: i + 1,
                ..r
            });
        }
    }
    Ok(TransportReport {
        holds: true,
        systems_checked: systems.len(),
        failure: None,
    })
}

/// `H^sigma`: `scale_l` acts as `scale_{sigma^-1(l)}` of `H`; all other
/// tables are unchanged.
pub fn twist(h: &FiniteAlgebra, sigma: &FieldAutomorphism) -> Result<FiniteAlgebra> {
    let sig = h.signature();
    let block = sig.scalars().ok_or(Error::NoScalarField)?;
    let sigma = FieldAutomorphism::new(&block.field, sigma.perm.clone())?;
    let inv = sigma.inverse();
    let name = if sigma.is_identity() {
        h.name().to_string()
    } else {
        format!("{}^sigma", h.name())
    };
    FiniteAlgebra::from_fn(name, sig.clone(), h.size(), |op, args| match sig.scalar_of(op) {
        Some(l) => h.apply(block.ops[inv.apply(l)], args),
        None => h.apply(op, args),
    })
}

/// Replaces every `scale_l` by `scale_{sigma(l)}`.
pub fn twist_term(t: &Term, sigma: &FieldAutomorphism) -> Term {
    t.map_apps(&mut |s, args| {
        let renamed = s
            .strip_prefix("scale_")
            .and_then(|l| l.parse::<usize>().ok())
            .filter(|&l| l < sigma.perm.len() && scale_symbol(l) == s)
            .map(|l| scale_symbol(sigma.apply(l)));
        Term::App(renamed.unwrap_or_else(|| s.to_string()), args)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub holds: bool,
    pub free_size: usize,
    pub nodes: usize,
    pub height: usize,
    /// `sigma_W` as a permutation of free elements.
    pub sigma_w: Vec<usize>,
    pub failure: Option<String>,
}

/// The algebras `H, H^sigma, H^(sigma^2), ...` up to the first repetition.
fn twist_orbit(h: &FiniteAlgebra, sigma: &FieldAutomorphism) -> Result<Vec<FiniteAlgebra>> {
    let mut orbit = vec![h.clone()];
    loop {
        let next = twist(orbit.last().unwrap(), sigma)?;
        if orbit.contains(&next) {
            return Ok(orbit);
        }
        orbit.push(next);
    }
}

/// Checks that `T -> sigma_W T` is an order-isomorphism from the lattice of
/// `H`-closed congruences of `W(X)` onto that of `H^sigma`-closed ones.
///
/// `W(X)` is the free algebra of the variety generated by the product of
/// the twist orbit of `H`, which contains `H` and `H^sigma`. `sigma_W`
/// sends an element to the value of its witness with every scale symbol
/// `scale_l` replaced by `scale_{sigma(l)}`; it is checked to be a
/// bijection that intertwines every operation with its twisted counterpart.
pub fn twist_closure_bijection(
    h: &FiniteAlgebra,
    sigma: &FieldAutomorphism,
    vars: &[String],
    caps: &Caps,
) -> Result<TwistReport> {
    let hs = twist(h, sigma)?;
    let orbit = twist_orbit(h, sigma)?;
    let refs: Vec<&FiniteAlgebra> = orbit.iter().collect();
    let base = FiniteAlgebra::product(h.signature(), &refs, caps)?;
    let w = Arc::new(FreeAlgebraRep::new(&base, vars, caps)?);
    let s_h = AffineSpace::over(w.clone(), h, caps)?;
    let s_hs = AffineSpace::over(w.clone(), &hs, caps)?;
    let sigma_w = semi_automorphism(&w, sigma)?;

    let fail = |m: String, sigma_w: Vec<usize>| TwistReport {
        holds: false,
        free_size: w.size(),
        nodes: 0,
        height: 0,
        sigma_w,
        failure: Some(m),
    };
    let lat_h = s_h.lattice(caps)?;
    let lat_hs = s_hs.lattice(caps)?;
    if lat_h.nodes.len() != lat_hs.nodes.len() || lat_h.height != lat_hs.height {
        return Ok(fail("lattices differ in size or height".into(), sigma_w));
    }
    let mut image = Vec::with_capacity(lat_h.nodes.len());
    for (i, node) in lat_h.nodes.iter().enumerate() {
        let moved = node.congruence.permuted(&sigma_w);
        match lat_hs.nodes.iter().position(|n| n.congruence == moved) {
            Some(j) => image.push(j),
            None => {
                return Ok(fail(
                    format!("image of node {i} ({}) is not closed", node.label),
                    sigma_w,
                ))
            }
        }
    }
    if !is_permutation(&image) {
        return Ok(fail("node map is not a bijection".into(), sigma_w));
    }
    for (i, a) in lat_h.nodes.iter().enumerate() {
        for (j, b) in lat_h.nodes.iter().enumerate() {
            let before = a.congruence.refines(&b.congruence);
            let after = lat_hs.nodes[image[i]]
                .congruence
                .refines(&lat_hs.nodes[image[j]].congruence);
            if before != after {
                return Ok(fail(format!("order not preserved at nodes {i}, {j}"), sigma_w));
            }
        }
    }
    Ok(TwistReport {
        holds: true,
        free_size: w.size(),
        nodes: lat_h.nodes.len(),
        height: lat_h.height,
        sigma_w,
        failure: None,
    })
}

/// `sigma_W` on the elements of `W`, validated as a bijection with
/// `sigma_W(f(a..)) = f^sigma(sigma_W a..)`, where `f^sigma` is `f` except
/// that `scale_l` becomes `scale_{sigma(l)}`.
pub fn semi_automorphism(w: &FreeAlgebraRep, sigma: &FieldAutomorphism) -> Result<Vec<usize>> {
    let sig = w.base().signature();
    let block = sig.scalars().ok_or(Error::NoScalarField)?;
    let map = (0..w.size())
        .map(|e| w.eval_term(&twist_term(&w.term(e), sigma)))
        .collect::<Result<Vec<_>>>()?;
    if !is_permutation(&map) {
        return Err(Error::IllFormedAutomorphism("sigma_W is not a bijection".into()));
    }
    let alg = w.algebra();
    let mut args = Vec::new();
    let mut imgs = Vec::new();
    for (op, sym) in sig.ops().iter().enumerate() {
        let twisted = sig.scalar_of(op).map_or(op, |l| block.ops[sigma.apply(l)]);
        args.resize(sym.arity, 0);
        imgs.resize(sym.arity, 0);
        for idx in 0..alg.table(op).len() {
            crate::algebra::decode_tuple(w.size(), idx, &mut args);
            for (i, &a) in args.iter().enumerate() {
                imgs[i] = map[a];
            }
            if map[alg.table(op)[idx]] != alg.apply(twisted, &imgs) {
                return Err(Error::IllFormedAutomorphism(format!(
                    "sigma_W does not intertwine `{}`",
                    sym.name
                )));
            }
        }
    }
    Ok(map)
}

/// A system together with a pair lying in its closure under exactly one of
/// two algebras.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleWitness {
    pub system: EquationSystem,
    pub pair: (Term, Term),
    /// The pair lies in the closure under the first algebra.
    pub in_first: bool,
}

impl OracleWitness {
    pub fn quasi_identity(&self) -> QuasiIdentity {
        QuasiIdentity {
            vars: self.system.vars.clone(),
            premises: self.system.pairs.clone(),
            conclusion: self.pair.clone(),
        }
    }

    /// Re-checks the claim by direct evaluation in both algebras.
    pub fn replay(&self, h1: &FiniteAlgebra, h2: &FiniteAlgebra, caps: &Caps) -> Result<bool> {
        let q = self.quasi_identity();
        let a = quasi_identity_holds(&q, h1, caps)?.holds;
        let b = quasi_identity_holds(&q, h2, caps)?.holds;
        Ok(a == self.in_first && b != self.in_first)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Homomorphisms into the second algebra separate points of the first.
    pub first_in_second: Separation,
    pub second_in_first: Separation,
    /// Result of the closure-comparison oracle, when it was run.
    pub oracle_equivalent: Option<bool>,
    pub oracle_witness: Option<OracleWitness>,
}

/// `W(X)` for `X = x` or `x, y`, of the variety generated by `H1 x H2`
/// (or by `H1` alone when the algebras coincide), with both affine spaces.
struct CommonSpace {
    s1: AffineSpace,
    s2: AffineSpace,
}

impl CommonSpace {
    fn new(h1: &FiniteAlgebra, h2: &FiniteAlgebra, vars: &[String], caps: &Caps) -> Result<CommonSpace> {
        h1.require_same_signature(h2)?;
        let base = if h1 == h2 {
            h1.clone()
        } else {
            FiniteAlgebra::product(h1.signature(), &[h1, h2], caps)?
        };
        let w = Arc::new(FreeAlgebraRep::new(&base, vars, caps)?);
        Ok(CommonSpace {
            s1: AffineSpace::over(w.clone(), h1, caps)?,
            s2: AffineSpace::over(w, h2, caps)?,
        })
    }

    fn free(&self) -> &Arc<FreeAlgebraRep> {
        self.s1.free()
    }
}

/// Distinct solution-set signatures `(sol_H1, sol_H2)` of element pairs.
struct PairSignatures {
    sigs: Vec<(PointSet, PointSet)>,
    /// Representative pair `(hi, lo)` for each signature.
    reps: Vec<(usize, usize)>,
}

impl PairSignatures {
    /// Pairs of the listed elements in colexicographic order; each
    /// signature keeps the first pair of least depth sum.
    fn new(space: &CommonSpace, elems: &[usize], caps: &Caps) -> Result<PairSignatures> {
        crate::check_cap(
            "element pairs",
            (elems.len() as u128) * (elems.len() as u128) / 2,
            caps.pairs,
        )?;
        let w = space.free();
        let mut index = std::collections::HashMap::new();
        let mut out = PairSignatures {
            sigs: Vec::new(),
            reps: Vec::new(),
        };
        for (i, &hi) in elems.iter().enumerate() {
            for &lo in &elems[..i] {
                let sig = (space.s1.pair_solutions(hi, lo), space.s2.pair_solutions(hi, lo));
                match index.get(&sig) {
                    Some(&j) => {
                        let (a, b): (usize, usize) = out.reps[j];
                        if w.depth(hi) + w.depth(lo) < w.depth(a) + w.depth(b) {
                            out.reps[j] = (hi, lo);
                        }
                    }
                    None => {
                        index.insert(sig.clone(), out.sigs.len());
                        out.sigs.push(sig);
                        out.reps.push((hi, lo));
                    }
                }
            }
        }
        Ok(out)
    }

    fn depth(&self, w: &FreeAlgebraRep, j: usize) -> usize {
        let (a, b) = self.reps[j];
        w.depth(a) + w.depth(b)
    }

    /// Premise systems as signature index lists: the empty system, then
    /// singletons, then pairs `j < k`.
    fn systems(&self, max_premises: usize) -> Vec<Vec<usize>> {
        let d = self.sigs.len();
        let mut out = vec![Vec::new()];
        if max_premises >= 1 {
            out.extend((0..d).map(|j| vec![j]));
        }
        if max_premises >= 2 {
            for j in 0..d {
                for k in j + 1..d {
                    out.push(vec![j, k]);
                }
            }
        }
        out
    }

    fn solve(&self, space: &CommonSpace, system: &[usize]) -> (PointSet, PointSet) {
        let mut a = PointSet::full(space.s1.num_points());
        let mut b = PointSet::full(space.s2.num_points());
        for &j in system {
            a = a.intersection(&self.sigs[j].0);
            b = b.intersection(&self.sigs[j].1);
        }
        (a, b)
    }

    /// Conclusions (signature indices) whose membership in the closure
    /// differs between the two algebras.
    fn disagreements<'a>(&'a self, sol: &'a (PointSet, PointSet)) -> impl Iterator<Item = usize> + 'a {
        (0..self.sigs.len())
            .filter(move |&c| sol.0.is_subset(&self.sigs[c].0) != sol.1.is_subset(&self.sigs[c].1))
    }

    fn witness(&self, space: &CommonSpace, system: &[usize], conclusion: usize) -> OracleWitness {
        let w = space.free();
        let term_pair = |j: usize| {
            let (hi, lo) = self.reps[j];
            (w.term(hi), w.term(lo))
        };
        let sol = self.solve(space, system);
        OracleWitness {
            system: EquationSystem {
                vars: w.vars().to_vec(),
                pairs: system.iter().map(|&j| term_pair(j)).collect(),
            },
            pair: term_pair(conclusion),
            in_first: sol.0.is_subset(&self.sigs[conclusion].0),
        }
    }
}

/// Brute-force comparison of `T''` under `H1` and `H2` for every system of
/// at most two element pairs of the common free algebra on `1..=max_vars`
/// variables. Returns the first disagreement: systems ordered by variable
/// count, then size, then signature discovery order; conclusions by
/// colexicographic order of element pairs.
pub fn closure_oracle(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    max_vars: usize,
    caps: &Caps,
) -> Result<Option<OracleWitness>> {
    for k in 1..=max_vars {
        let space = CommonSpace::new(h1, h2, &var_names(k), caps)?;
        let elems: Vec<usize> = (0..space.free().size()).collect();
        let table = PairSignatures::new(&space, &elems, caps)?;
        let mut seen = HashSet::new();
        for system in table.systems(2) {
            let sol = table.solve(&space, &system);
            if !seen.insert(sol.clone()) {
                continue;
            }
            let first = table.disagreements(&sol).next();
            if let Some(c) = first {
                return Ok(Some(table.witness(&space, &system, c)));
            }
        }
    }
    Ok(None)
}

/// Decided by mutual point separation; with `oracle` set, the brute-force
/// closure comparison on at most two variables is run as well and its
/// witness attached.
pub fn geo_equivalent(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    oracle: bool,
    caps: &Caps,
) -> Result<EquivalenceVerdict> {
    h1.require_same_signature(h2)?;
    let first_in_second = h1.separates_points(h2, caps)?;
    let second_in_first = h2.separates_points(h1, caps)?;
    let equivalent = first_in_second.separated && second_in_first.separated;
    let (oracle_equivalent, oracle_witness) = if oracle {
        let w = closure_oracle(h1, h2, 2, caps)?;
        (Some(w.is_none()), w)
    } else {
        (None, None)
    };
    Ok(EquivalenceVerdict {
        equivalent,
        first_in_second,
        second_in_first,
        oracle_equivalent,
        oracle_witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiComparison {
    pub agree: bool,
    /// Distinct quasi-identities (up to the solution sets involved) compared.
    pub classes_checked: usize,
    pub witness: Option<OracleWitness>,
}

/// Compares the quasi-identities with at most `max_premises` premises whose
/// terms have depth at most `depth` over at most `max_vars` variables.
///
/// Terms of depth `<= d` denote exactly the free elements first reached in
/// round `<= d` of the free algebra construction, so quasi-identities are
/// enumerated through those elements. The reported disagreement is the
/// first in the order (variable count, total term depth, premise count,
/// element indices).
pub fn same_quasi_identities_up_to(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    depth: usize,
    max_vars: usize,
    max_premises: usize,
    caps: &Caps,
) -> Result<QuasiComparison> {
    h1.require_same_signature(h2)?;
    let mut checked = 0;
    for k in 1..=max_vars {
        let space = CommonSpace::new(h1, h2, &var_names(k), caps)?;
        let w = space.free().clone();
        let elems: Vec<usize> = (0..w.size()).filter(|&e| w.depth(e) <= depth).collect();
        let table = PairSignatures::new(&space, &elems, caps)?;
        type Key = (usize, usize, Vec<(usize, usize)>, (usize, usize));
        let mut best: Option<(Key, Vec<usize>, usize)> = None;
        for system in table.systems(max_premises) {
            let sol = table.solve(&space, &system);
            checked += table.sigs.len();
            let premise_depth: usize = system.iter().map(|&j| table.depth(&w, j)).sum();
            for c in table.disagreements(&sol) {
                let key: Key = (
                    premise_depth + table.depth(&w, c),
                    system.len(),
                    system.iter().map(|&j| table.reps[j]).collect(),
                    table.reps[c],
                );
                if best.as_ref().map_or(true, |(b, _, _)| key < *b) {
                    best = Some((key, system.clone(), c));
                }
            }
        }
        if let Some((_, system, c)) = best {
            return Ok(QuasiComparison {
                agree: false,
                classes_checked: checked,
                witness: Some(table.witness(&space, &system, c)),
            });
        }
    }
    Ok(QuasiComparison {
        agree: true,
        classes_checked: checked,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostReport {
    pub holds: bool,
    /// Steps of the successful chain `H1 -> H -> H' ~ H2`.
    pub chain: Vec<String>,
    pub tried: usize,
}

/// Searches `H` among `H1` and its opposite, `H'` among the scalar twists
/// of `H`, and tests `H'` for geometric equivalence with `H2`.
pub fn almost_geo_equivalent(h1: &FiniteAlgebra, h2: &FiniteAlgebra, caps: &Caps) -> Result<AlmostReport> {
    h1.require_same_signature(h2)?;
    let mut firsts = vec![(h1.clone(), format!("{} (identity)", h1.name()))];
    if h1.signature().product().is_some() {
        firsts.push((opposite(h1)?, format!("{} (opposite)", h1.name())));
    }
    let sigmas: Vec<(Option<FieldAutomorphism>, String)> = match h1.signature().scalars() {
        Some(block) => frobenius_automorphisms(&block.field)?
            .into_iter()
            .enumerate()
            .map(|(i, s)| (Some(s), if i == 0 { "id".to_string() } else { format!("frob^{i}") }))
            .collect(),
        None => vec![(None, "id".to_string())],
    };
    let mut tried = 0;
    for (h, first_step) in &firsts {
        for (sigma, sigma_name) in &sigmas {
            tried += 1;
            let hp = match sigma {
                Some(s) => twist(h, s)?,
                None => h.clone(),
            };
            if geo_equivalent(&hp, h2, false, caps)?.equivalent {
                return Ok(AlmostReport {
                    holds: true,
                    chain: vec![
                        first_step.clone(),
                        format!("twist by {sigma_name}"),
                        format!("geometrically equivalent to {}", h2.name()),
                    ],
                    tried,
                });
            }
        }
    }
    Ok(AlmostReport {
        holds: false,
        chain: Vec::new(),
        tried,
    })
}

/// Kernel partitions of `W(X)` for the closures of `T` under two algebras.
pub fn closure_partitions(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    system: &EquationSystem,
    caps: &Caps,
) -> Result<(Partition, Partition)> {
    let space = CommonSpace::new(h1, h2, &system.vars, caps)?;
    Ok((
        space.s1.closure_of_system(system)?.partition,
        space.s2.closure_of_system(system)?.partition,
    ))
}
