//! Algebras over a finite field `P` whose operations are each linear or
//! multilinear over `P` (constants allowed): linear spaces, associative and
//! Lie algebras, the field over itself.
//!
//! For such an `H` the free algebra `W(X)` of `Var(H)` is a `P`-subspace of
//! the functions `H^X -> H`, and two elements are identified by the kernel
//! `A'` of a point set exactly when their difference vanishes on `A`. So
//! `A'` is stored as the subspace `I_A` of `W` and every Galois operation
//! reduces to Gaussian elimination, even when `W` has far too many elements
//! to list.

use std::collections::{HashMap, HashSet};

use crate::algebra::{FiniteAlgebra, ScalarField};
use crate::error::{Error, Result};
use crate::galois::PointSet;
use crate::term::{Point, Term};
use crate::{check_cap, pow_u128, Caps};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OpKind {
    Constant,
    Linear,
    Multilinear,
}

/// `H` as a vector space `P^d`, with every operation classified.
#[derive(Debug, Clone)]
pub struct LinearStructure {
    field: ScalarField,
    plus: usize,
    zero: usize,
    coords: Vec<Vec<usize>>,
    elements: HashMap<Vec<usize>, usize>,
    kinds: Vec<OpKind>,
}

impl LinearStructure {
    /// Finds a binary operation making `H` a `P`-vector space together with
    /// the `scale_l` operations, a basis, and checks that every operation
    /// is constant, linear or multilinear.
    pub fn detect(h: &FiniteAlgebra, caps: &Caps) -> Result<LinearStructure> {
        let sig = h.signature();
        let block = sig.scalars().ok_or(Error::NoScalarField)?;
        let field = block.field.clone();
        let n = h.size();
        let scale = |l: usize, x: usize| h.apply(block.ops[l], &[x]);
        let zero = scale(field.zero(), 0);
        let is_space = |b: usize| {
            let add = |x: usize, y: usize| h.apply(b, &[x, y]);
            let q = field.order();
            (0..n).all(|x| add(x, zero) == x && scale(field.one(), x) == x)
                && (0..n).all(|x| (0..n).all(|y| add(x, y) == add(y, x)))
                && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| add(add(x, y), z) == add(x, add(y, z)))))
                && (0..q).all(|l| {
                    (0..q).all(|m| {
                        (0..n).all(|x| {
                            scale(field.add(l, m), x) == add(scale(l, x), scale(m, x))
                                && scale(field.mul(l, m), x) == scale(l, scale(m, x))
                        })
                    }) && (0..n).all(|x| (0..n).all(|y| scale(l, add(x, y)) == add(scale(l, x), scale(l, y))))
                })
        };
        let plus = (0..sig.ops().len())
            .filter(|&i| sig.ops()[i].arity == 2)
            .find(|&b| is_space(b))
            .ok_or_else(|| {
                Error::InvalidAlgebra(format!(
                    "{}: no binary operation makes it a vector space over {}",
                    h.name(),
                    field.name()
                ))
            })?;

        // greedy basis; later basis vectors get later coordinates
        let mut spanned: Vec<(usize, Vec<usize>)> = vec![(zero, Vec::new())];
        let mut seen = vec![false; n];
        seen[zero] = true;
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut next = Vec::new();
            for (s, c) in &spanned {
                for l in 0..field.order() {
                    let e = h.apply(plus, &[*s, scale(l, x)]);
                    seen[e] = true;
                    let mut c = c.clone();
                    c.push(l);
                    next.push((e, c));
                }
            }
            spanned = next;
        }
        let dim = spanned[0].1.len();
        let mut coords = vec![Vec::new(); n];
        for (e, c) in spanned {
            coords[e] = c;
        }
        debug_assert!(coords.iter().all(|c| c.len() == dim));
        let elements = coords.iter().enumerate().map(|(e, c)| (c.clone(), e)).collect();

        let mut lin = LinearStructure {
            field,
            plus,
            zero,
            coords,
            elements,
            kinds: Vec::new(),
        };
        for (i, op) in sig.ops().iter().enumerate() {
            let kind = lin.classify(h, i, op.arity, caps)?.ok_or_else(|| {
                Error::InvalidAlgebra(format!(
                    "{}: `{}` is neither linear nor multilinear over {}",
                    h.name(),
                    op.name,
                    lin.field.name()
                ))
            })?;
            lin.kinds.push(kind);
        }
        Ok(lin)
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let c: Vec<usize> = self.coords[x]
            .iter()
            .zip(&self.coords[y])
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        self.elements[&c]
    }

    fn scale(&self, l: usize, x: usize) -> usize {
        let c: Vec<usize> = self.coords[x].iter().map(|&a| self.field.mul(l, a)).collect();
        self.elements[&c]
    }

    fn classify(&self, h: &FiniteAlgebra, op: usize, arity: usize, caps: &Caps) -> Result<Option<OpKind>> {
        if arity == 0 {
            return Ok(Some(OpKind::Constant));
        }
        let n = h.size();
        let q = self.field.order();
        let tuples = check_cap("operation check", pow_u128(n, 2 * arity), caps.homs)?;
        let decode = |mut i: usize| -> Vec<usize> {
            let mut t = vec![0; arity];
            for s in t.iter_mut().rev() {
                *s = i % n;
                i /= n;
            }
            t
        };
        let f = |t: &[usize]| h.apply(op, t);
        let homogeneous = |pos: Option<usize>| {
            (0..pow_u128(n, arity) as usize).all(|i| {
                let u = decode(i);
                (0..q).all(|l| {
                    let scaled: Vec<usize> = match pos {
                        None => u.iter().map(|&a| self.scale(l, a)).collect(),
                        Some(p) => {
                            let mut v = u.clone();
                            v[p] = self.scale(l, v[p]);
                            v
                        }
                    };
                    f(&scaled) == self.scale(l, f(&u))
                })
            })
        };
        let linear = (0..tuples).all(|i| {
            let (u, v) = (decode(i / pow_u128(n, arity) as usize), decode(i % pow_u128(n, arity) as usize));
            let sum: Vec<usize> = u.iter().zip(&v).map(|(&a, &b)| self.add(a, b)).collect();
            f(&sum) == self.add(f(&u), f(&v))
        }) && homogeneous(None);
        if linear {
            return Ok(Some(OpKind::Linear));
        }
        let multilinear = (0..arity).all(|p| {
            (0..pow_u128(n, arity) as usize).all(|i| {
                let u = decode(i);
                (0..n).all(|b| {
                    let mut v = u.clone();
                    v[p] = b;
                    let mut s = u.clone();
                    s[p] = self.add(u[p], b);
                    f(&s) == self.add(f(&u), f(&v))
                })
            }) && homogeneous(Some(p))
        });
        Ok(multilinear.then_some(OpKind::Multilinear))
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    /// Dimension of `H` over `P`.
    pub fn dim(&self) -> usize {
        self.coords[0].len()
    }

    /// Index of the addition operation.
    pub fn plus(&self) -> usize {
        self.plus
    }
}

/// A subspace of `P^len` in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    len: usize,
    rows: Vec<Vec<usize>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(len: usize) -> Subspace {
        Subspace {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    fn reduce(&self, f: &ScalarField, v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != f.zero() {
                let m = f.neg(c);
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(m, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, f: &ScalarField, v: &[usize]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == f.zero())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, f: &ScalarField, v: &[usize]) -> bool {
        let mut v = self.reduce(f, v);
        let Some(p) = v.iter().position(|&x| x != f.zero()) else {
            return false;
        };
        let inv = f.inv(v[p]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(inv, *x);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != f.zero() {
                let m = f.neg(c);
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = f.add(*x, f.mul(m, r));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn is_subspace_of(&self, f: &ScalarField, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(f, r))
    }
}

/// `Hom(W(X), H)` for a linear `H`, with `W(X)` as a subspace of
/// `P^(d * |H^X|)`: coordinates of the value at point 0, then at point 1,
/// and so on.
#[derive(Debug, Clone)]
pub struct LinearSpace {
    h: FiniteAlgebra,
    lin: LinearStructure,
    vars: Vec<String>,
    points: usize,
    w: Subspace,
}

impl LinearSpace {
    pub fn new(h: &FiniteAlgebra, vars: &[String], caps: &Caps) -> Result<LinearSpace> {
        if vars.is_empty() {
            return Err(Error::EmptyVariables);
        }
        let lin = LinearStructure::detect(h, caps)?;
        let points = check_cap("points", pow_u128(h.size(), vars.len()), caps.points)?;
        let mut space = LinearSpace {
            h: h.clone(),
            lin,
            vars: vars.to_vec(),
            points,
            w: Subspace::zero(0),
        };
        space.w = space.generate();
        Ok(space)
    }

    /// Closure of the generators under all operations. Linear operations
    /// and multilinear ones map spans into spans of their values on basis
    /// vectors, so those values suffice.
    fn generate(&self) -> Subspace {
        let f = &self.lin.field;
        let zero_fn = vec![self.lin.zero; self.points];
        let mut w = Subspace::zero(self.points * self.lin.dim());
        for i in 0..self.vars.len() {
            let g: Vec<usize> = (0..self.points).map(|p| self.point(p).values[i]).collect();
            w.insert(f, &self.vector(&g));
        }
        loop {
            let basis: Vec<Vec<usize>> = w.rows().iter().map(|r| self.function(r)).collect();
            let mut grew = false;
            for (op, kind) in self.lin.kinds.iter().enumerate() {
                let arity = self.h.signature().ops()[op].arity;
                let mut arg_lists: Vec<Vec<&Vec<usize>>> = Vec::new();
                match kind {
                    OpKind::Constant => arg_lists.push(Vec::new()),
                    OpKind::Linear => {
                        for pos in 0..arity {
                            for b in &basis {
                                let mut args = vec![&zero_fn; arity];
                                args[pos] = b;
                                arg_lists.push(args);
                            }
                        }
                    }
                    OpKind::Multilinear => {
                        let k = basis.len();
                        for mut i in 0..k.pow(arity as u32) {
                            let mut args = vec![&zero_fn; arity];
                            for slot in args.iter_mut().rev() {
                                *slot = &basis[i % k];
                                i /= k;
                            }
                            arg_lists.push(args);
                        }
                    }
                }
                for args in arg_lists {
                    let values: Vec<usize> = (0..self.points)
                        .map(|p| {
                            let a: Vec<usize> = args.iter().map(|g| g[p]).collect();
                            self.h.apply(op, &a)
                        })
                        .collect();
                    grew |= w.insert(f, &self.vector(&values));
                }
            }
            if !grew {
                return w;
            }
        }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.h
    }

    pub fn structure(&self) -> &LinearStructure {
        &self.lin
    }

    pub fn field(&self) -> &ScalarField {
        &self.lin.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn point(&self, index: usize) -> Point {
        Point::from_index(&self.vars, self.h.size(), index)
    }

    /// `W(X)` as a subspace.
    pub fn free(&self) -> &Subspace {
        &self.w
    }

    /// `|W(X)| = |P|^dim`, saturating.
    pub fn free_size(&self) -> u128 {
        pow_u128(self.lin.field.order(), self.w.dim())
    }

    /// Whether `W(X)` is the whole space of functions `H^X -> H`.
    pub fn is_full(&self) -> bool {
        self.w.dim() == self.points * self.lin.dim()
    }

    /// Coordinate vector of a function given by its values.
    pub fn vector(&self, values: &[usize]) -> Vec<usize> {
        values.iter().flat_map(|&v| self.lin.coords[v].iter().copied()).collect()
    }

    /// Values of the function with coordinate vector `v`.
    pub fn function(&self, v: &[usize]) -> Vec<usize> {
        v.chunks(self.lin.dim().max(1))
            .take(self.points)
            .map(|c| self.lin.elements[c])
            .collect()
    }

    /// Coordinate vector of a term; it lies in `W(X)`.
    pub fn eval(&self, t: &Term) -> Result<Vec<usize>> {
        let values = (0..self.points)
            .map(|p| t.eval(&self.h, &self.point(p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.vector(&values))
    }

    pub fn difference(&self, u: &[usize], v: &[usize]) -> Vec<usize> {
        let f = &self.lin.field;
        u.iter().zip(v).map(|(&a, &b)| f.add(a, f.neg(b))).collect()
    }

    fn vanishes_at(&self, v: &[usize], p: usize) -> bool {
        let d = self.lin.dim();
        v[p * d..(p + 1) * d].iter().all(|&x| x == self.lin.field.zero())
    }

    /// Points where `u = v`.
    pub fn pair_solutions(&self, u: &[usize], v: &[usize]) -> PointSet {
        let diff = self.difference(u, v);
        PointSet::from_indices(self.points, (0..self.points).filter(|&p| self.vanishes_at(&diff, p)))
    }

    pub fn solve_pairs(&self, pairs: &[(Vec<usize>, Vec<usize>)]) -> PointSet {
        pairs.iter().fold(PointSet::full(self.points), |acc, (u, v)| {
            acc.intersection(&self.pair_solutions(u, v))
        })
    }

    /// `I_A`: the elements of `W(X)` vanishing on `A`; `u A' v` iff
    /// `u - v` lies in it.
    pub fn ideal(&self, a: &PointSet) -> Subspace {
        let f = &self.lin.field;
        let d = self.lin.dim();
        let pts = a.indices();
        let cut = pts.len() * d;
        // rows (restriction to A, full vector); eliminate on the first part
        let mut rows: Vec<Vec<usize>> = self
            .w
            .rows()
            .iter()
            .map(|r| {
                let mut row: Vec<usize> = pts.iter().flat_map(|&p| r[p * d..(p + 1) * d].iter().copied()).collect();
                row.extend_from_slice(r);
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..cut {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != f.zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = f.inv(rows[rank][col]).expect("nonzero pivot");
            for x in rows[rank].iter_mut() {
                *x = f.mul(inv, *x);
            }
            let pivot_row = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[col] != f.zero() {
                    let m = f.neg(row[col]);
                    for (x, &r) in row.iter_mut().zip(&pivot_row) {
                        *x = f.add(*x, f.mul(m, r));
                    }
                }
            }
            rank += 1;
        }
        let mut ideal = Subspace::zero(self.w.len);
        for row in &rows[rank..] {
            ideal.insert(f, &row[cut..]);
        }
        ideal
    }

    /// Common zeros of a subspace of `W(X)`.
    pub fn zeros(&self, ideal: &Subspace) -> PointSet {
        PointSet::from_indices(
            self.points,
            (0..self.points).filter(|&p| ideal.rows().iter().all(|r| self.vanishes_at(r, p))),
        )
    }

    /// `A''`.
    pub fn closure_of_points(&self, a: &PointSet) -> PointSet {
        self.zeros(&self.ideal(a))
    }

    /// Whether `u = v` lies in the congruence `I`.
    pub fn identifies(&self, ideal: &Subspace, u: &[usize], v: &[usize]) -> bool {
        ideal.contains(&self.lin.field, &self.difference(u, v))
    }

    /// Every element of `W(X)`, as coordinate vectors, when there are at
    /// most `cap` of them.
    pub fn elements(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let total = check_cap("free elements", self.free_size(), cap)?;
        let f = &self.lin.field;
        let q = f.order();
        let rows = self.w.rows();
        Ok((0..total)
            .map(|mut i| {
                let mut v = vec![f.zero(); self.w.len];
                for r in rows {
                    let c = i % q;
                    i /= q;
                    for (x, &y) in v.iter_mut().zip(r) {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
                v
            })
            .collect())
    }

    /// Every algebraic set, sorted by cardinality then by point indices.
    /// With `W(X)` listable these are the intersections of zero sets of its
    /// elements; when `W(X)` is every function, every subset is a zero set.
    pub fn algebraic_sets(&self, caps: &Caps) -> Result<Vec<PointSet>> {
        let np = self.points;
        let mut sets: Vec<PointSet> = match self.elements(caps.free) {
            Ok(all) => {
                let zero = vec![self.lin.field.zero(); self.w.len];
                let generators: HashSet<PointSet> = all.iter().map(|w| self.pair_solutions(w, &zero)).collect();
                let mut family = HashSet::from([PointSet::full(np)]);
                let mut queue = vec![PointSet::full(np)];
                while let Some(a) = queue.pop() {
                    for g in &generators {
                        let b = a.intersection(g);
                        if !family.contains(&b) {
                            check_cap("lattice nodes", family.len() as u128 + 1, caps.free)?;
                            family.insert(b.clone());
                            queue.push(b);
                        }
                    }
                }
                family.into_iter().collect()
            }
            Err(e) if self.is_full() => {
                let total = check_cap("lattice nodes", pow_u128(2, np), caps.pairs).map_err(|_| e)?;
                (0..total)
                    .map(|mask| PointSet::from_indices(np, (0..np).filter(|p| mask >> p & 1 == 1)))
                    .collect()
            }
            Err(e) => return Err(e),
        };
        sets.sort_by_key(PointSet::key);
        Ok(sets)
    }

    /// Whether `A -> I_A` is an order-reversing bijection from `sets` onto
    /// its image with inverse `I -> zeros(I)`. Up to 4096 nodes every pair is
    /// compared; beyond that the comparison runs over the steps from `A` to
    /// the closure of `A + {p}`, through which every strict inclusion of
    /// closed sets factors.
    pub fn lattice_duality_holds(&self, sets: &[PointSet]) -> bool {
        let ideals: Vec<Subspace> = sets.iter().map(|a| self.ideal(a)).collect();
        if sets.iter().zip(&ideals).any(|(a, i)| self.zeros(i) != *a) {
            return false;
        }
        if ideals.iter().collect::<HashSet<_>>().len() != ideals.len() {
            return false;
        }
        let points: Vec<Vec<usize>> = sets.iter().map(PointSet::indices).collect();
        // rows of I_B lie in I_A iff they vanish on A
        let below = |b: usize, a: usize| {
            ideals[b]
                .rows()
                .iter()
                .all(|r| points[a].iter().all(|&p| self.vanishes_at(r, p)))
        };
        let m = sets.len();
        if m <= 4096 {
            return (0..m).all(|i| (0..m).all(|j| sets[i].is_subset(&sets[j]) == below(j, i)));
        }
        let index: HashMap<&PointSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        (0..m).all(|i| {
            (0..self.points).filter(|&p| !sets[i].contains(p)).all(|p| {
                let mut grown = sets[i].clone();
                grown.insert(p);
                // nodes are already known to be closed
                let j = match index.get(&grown) {
                    Some(&j) => Some(j),
                    None => index.get(&self.closure_of_points(&grown)).copied(),
                };
                j.is_some_and(|j| below(j, i) && !below(i, j))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::AffineSpace;
    use crate::term::var_names;
    use crate::zoo;

    fn f4() -> ScalarField {
        ScalarField::galois(2, 2).unwrap()
    }

    #[test]
    fn detects_field_algebra() {
        let h = zoo::field_algebra(&f4());
        let lin = LinearStructure::detect(&h, &Caps::default()).unwrap();
        assert_eq!(lin.dim(), 1);
        assert_eq!(h.signature().ops()[lin.plus()].name, "add");
        assert!(LinearStructure::detect(&zoo::cyclic_group(4), &Caps::default()).is_err());
    }

    #[test]
    fn free_dimensions() {
        let caps = Caps::default();
        let h = zoo::field_algebra(&f4());
        // every function F4^k -> F4 is a polynomial
        for k in 1..=2 {
            let s = LinearSpace::new(&h, &var_names(k), &caps).unwrap();
            assert_eq!(s.free().dim(), 4usize.pow(k as u32));
            assert!(s.is_full());
        }
        // linear forms a x + b y + c
        let s = LinearSpace::new(&zoo::linear_algebra(&f4()), &var_names(2), &caps).unwrap();
        assert_eq!(s.free().dim(), 3);
    }

    #[test]
    fn agrees_with_tables_on_one_variable() {
        let caps = Caps::default();
        let h = zoo::field_algebra(&f4());
        let vars = var_names(1);
        let lin = LinearSpace::new(&h, &vars, &caps).unwrap();
        let tab = AffineSpace::new(&h, &vars, &caps).unwrap();
        assert_eq!(tab.num_elements() as u128, lin.free_size());
        let w = tab.free();
        let vecs: Vec<Vec<usize>> = (0..w.size()).map(|e| lin.eval(&w.term(e)).unwrap()).collect();
        for mask in 0..16usize {
            let a = PointSet::from_indices(4, (0..4).filter(|i| mask >> i & 1 == 1));
            assert_eq!(lin.closure_of_points(&a), tab.closure_of_points(&a));
            let ideal = lin.ideal(&a);
            let kernel = tab.kernel(&a);
            for e in 0..w.size() {
                for g in 0..w.size() {
                    assert_eq!(lin.identifies(&ideal, &vecs[e], &vecs[g]), kernel.same(e, g));
                }
            }
        }
    }

    #[test]
    fn empty_set_is_closed_only_with_constants() {
        let caps = Caps::default();
        let h = zoo::field_algebra(&f4());
        let s = LinearSpace::new(&h, &var_names(2), &caps).unwrap();
        let empty = PointSet::empty(16);
        assert!(s.closure_of_points(&empty).is_empty());
        let one = PointSet::from_indices(16, [5]);
        assert_eq!(s.closure_of_points(&one), one);
    }

    #[test]
    fn lattice_of_field_algebra() {
        let f4 = ScalarField::galois(2, 2).unwrap();
        let h = zoo::field_algebra(&f4);
        let caps = Caps::default();
        let one = LinearSpace::new(&h, &var_names(1), &caps).unwrap();
        let sets = one.algebraic_sets(&caps).unwrap();
        assert_eq!(sets.len(), 16);
        assert!(one.lattice_duality_holds(&sets));
        let two = LinearSpace::new(&h, &var_names(2), &caps).unwrap();
        let sets = two.algebraic_sets(&caps).unwrap();
        assert_eq!(sets.len(), 1 << 16);
        assert!(two.lattice_duality_holds(&sets));
    }
}
