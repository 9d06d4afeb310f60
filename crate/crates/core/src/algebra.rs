//! Finite algebras over a declared signature.
//!
//! Carriers are `{0..n-1}`. An operation of arity `r` is stored as a flat
//! row-major table of length `n^r`: the entry for `(a_1, ..., a_r)` sits at
//! index `a_1 n^(r-1) + ... + a_r`. All enumeration orders are lexicographic
//! on these integers.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::term::{Point, Term};
use crate::{check_cap, pow_u128, Caps};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> OpSymbol {
        OpSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// A finite field `F_{p^k}` given by its addition and multiplication tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScalarField {
    name: String,
    p: usize,
    k: usize,
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
}

impl ScalarField {
    /// Validates the tables: both operations commutative and associative,
    /// multiplication distributes over addition, additive inverses, inverses
    /// of nonzero elements, and `|P| = p^k` with `p` prime.
    pub fn new(
        name: impl Into<String>,
        p: usize,
        k: usize,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
    ) -> Result<ScalarField> {
        let name = name.into();
        let bad = |m: String| Error::InvalidField(format!("{name}: {m}"));
        if p < 2 || (2..p).any(|d| p % d == 0) {
            return Err(bad(format!("characteristic {p} is not prime")));
        }
        if k == 0 {
            return Err(bad("degree must be at least 1".into()));
        }
        let q = pow_u128(p, k);
        if q > 1 << 16 {
            return Err(bad(format!("order {q} too large")));
        }
        let q = q as usize;
        let flatten = |t: Vec<Vec<usize>>, what: &str| -> Result<Vec<usize>> {
            if t.len() != q || t.iter().any(|row| row.len() != q) {
                return Err(bad(format!("{what} table must be {q}x{q}")));
            }
            let flat: Vec<usize> = t.into_iter().flatten().collect();
            if let Some(e) = flat.iter().find(|&&e| e >= q) {
                return Err(bad(format!("{what} table entry {e} out of range")));
            }
            Ok(flat)
        };
        let add = flatten(add, "addition")?;
        let mul = flatten(mul, "multiplication")?;
        let at = |t: &[usize], a: usize, b: usize| t[a * q + b];
        let zero = (0..q)
            .find(|&e| (0..q).all(|x| at(&add, e, x) == x && at(&add, x, e) == x))
            .ok_or_else(|| bad("no additive identity".into()))?;
        let one = (0..q)
            .find(|&e| (0..q).all(|x| at(&mul, e, x) == x && at(&mul, x, e) == x))
            .ok_or_else(|| bad("no multiplicative identity".into()))?;
        if zero == one {
            return Err(bad("zero equals one".into()));
        }
        for a in 0..q {
            for b in 0..q {
                if at(&add, a, b) != at(&add, b, a) {
                    return Err(bad(format!("addition not commutative at ({a},{b})")));
                }
                if at(&mul, a, b) != at(&mul, b, a) {
                    return Err(bad(format!("multiplication not commutative at ({a},{b})")));
                }
                for c in 0..q {
                    if at(&add, at(&add, a, b), c) != at(&add, a, at(&add, b, c)) {
                        return Err(bad(format!("addition not associative at ({a},{b},{c})")));
                    }
                    if at(&mul, at(&mul, a, b), c) != at(&mul, a, at(&mul, b, c)) {
                        return Err(bad(format!(
                            "multiplication not associative at ({a},{b},{c})"
                        )));
                    }
                    if at(&mul, a, at(&add, b, c)) != at(&add, at(&mul, a, b), at(&mul, a, c)) {
                        return Err(bad(format!("distributivity fails at ({a},{b},{c})")));
                    }
                }
            }
            if !(0..q).any(|b| at(&add, a, b) == zero) {
                return Err(bad(format!("{a} has no additive inverse")));
            }
            if a != zero && !(0..q).any(|b| at(&mul, a, b) == one) {
                return Err(bad(format!("{a} has no multiplicative inverse")));
            }
        }
        // characteristic: one added to itself p times is zero, fewer times is not
        let mut acc = one;
        for i in 1..p {
            if acc == zero {
                return Err(bad(format!("characteristic divides {i}, not {p}")));
            }
            acc = at(&add, acc, one);
        }
        if acc != zero {
            return Err(bad(format!("characteristic is not {p}")));
        }
        Ok(ScalarField {
            name,
            p,
            k,
            q,
            add,
            mul,
            zero,
            one,
        })
    }

    /// The field `F_{p^k}` with elements encoded as base-`p` digit vectors
    /// of polynomial residues (least significant coefficient first) modulo
    /// the lexicographically first monic irreducible of degree `k`.
    pub fn galois(p: usize, k: usize) -> Result<ScalarField> {
        let q = pow_u128(p, k);
        if p < 2 || (2..p).any(|d| p % d == 0) || k == 0 || q > 1 << 12 {
            return Err(Error::InvalidField(format!("cannot build F_{p}^{k}")));
        }
        let q = q as usize;
        let modulus = first_irreducible(p, k);
        let digits = |mut e: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = e % p;
                    e /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![vec![0; q]; q];
        let mut mul = vec![vec![0; q]; q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a][b] = encode(&sum);
                let mut prod = vec![0; 2 * k];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce modulo the monic modulus
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(k) {
                            let idx = deg - k + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                        prod[deg] = 0;
                    }
                }
                mul[a][b] = encode(&prod[..k]);
            }
        }
        ScalarField::new(format!("F{q}"), p, k, add, mul)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn characteristic(&self) -> usize {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.k
    }
    pub fn order(&self) -> usize {
        self.q
    }
    pub fn zero(&self) -> usize {
        self.zero
    }
    pub fn one(&self) -> usize {
        self.one
    }
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b]
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }
    pub fn add_table(&self) -> Vec<Vec<usize>> {
        self.add.chunks(self.order()).map(<[usize]>::to_vec).collect()
    }
    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order()).map(<[usize]>::to_vec).collect()
    }
    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.one, |acc, _| self.mul(acc, a))
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == self.zero).expect("field has additive inverses")
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (0..self.q).find(|&b| self.mul(a, b) == self.one)
    }
}

/// Coefficients (constant term first, monic, length `k + 1`) of the first
/// irreducible polynomial of degree `k` over `F_p`, found by trial division.
fn first_irreducible(p: usize, k: usize) -> Vec<usize> {
    let poly = |mut idx: usize, deg: usize| -> Vec<usize> {
        let mut c: Vec<usize> = (0..deg)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d
            })
            .collect();
        c.push(1);
        c
    };
    let divides = |d: &[usize], f: &[usize]| -> bool {
        let mut r = f.to_vec();
        let dd = d.len() - 1;
        for deg in (dd..r.len()).rev() {
            let c = r[deg];
            if c != 0 {
                for (i, &m) in d.iter().enumerate() {
                    let idx = deg - dd + i;
                    r[idx] = (r[idx] + (p - c) * m % p) % p;
                }
            }
        }
        r[..dd].iter().all(|&c| c == 0)
    };
    'candidates: for idx in 0..pow_u128(p, k) as usize {
        let f = poly(idx, k);
        for dd in 1..=k / 2 {
            for j in 0..pow_u128(p, dd) as usize {
                if divides(&poly(j, dd), &f) {
                    continue 'candidates;
                }
            }
        }
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Name of the unary symbol carrying multiplication by the field element
/// `lambda`.
pub fn scale_symbol(lambda: usize) -> String {
    format!("scale_{lambda}")
}

/// Scalar actions of a finite field: one unary operation per field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScalarBlock {
    pub field: ScalarField,
    /// `ops[lambda]` is the index of `scale_lambda` in the signature.
    pub ops: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSymbol>,
    product: Option<usize>,
    scalars: Option<ScalarBlock>,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Result<Signature> {
        for (i, op) in ops.iter().enumerate() {
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::InvalidSignature(format!("duplicate symbol `{}`", op.name)));
            }
        }
        Ok(Signature {
            ops,
            product: None,
            scalars: None,
        })
    }

    /// Designates a binary symbol as the reversible product.
    pub fn with_product(mut self, symbol: &str) -> Result<Signature> {
        if self.product.is_some() {
            return Err(Error::InvalidSignature("more than one product designation".into()));
        }
        let idx = self.op_index(symbol)?;
        if self.ops[idx].arity != 2 {
            return Err(Error::InvalidSignature(format!("product `{symbol}` is not binary")));
        }
        self.product = Some(idx);
        Ok(self)
    }

    /// Attaches a scalar field; `scale_<lambda>` must be declared as a unary
    /// symbol for every field element.
    pub fn with_scalars(mut self, field: ScalarField) -> Result<Signature> {
        if self.scalars.is_some() {
            return Err(Error::InvalidSignature("more than one scalar field".into()));
        }
        let mut ops = Vec::new();
        for lambda in 0..field.order() {
            let name = scale_symbol(lambda);
            let idx = self
                .op_index(&name)
                .map_err(|_| Error::InvalidSignature(format!("missing scalar symbol `{name}`")))?;
            if self.ops[idx].arity != 1 {
                return Err(Error::InvalidSignature(format!("`{name}` must be unary")));
            }
            ops.push(idx);
        }
        self.scalars = Some(ScalarBlock { field, ops });
        Ok(self)
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn op_index(&self, name: &str) -> Result<usize> {
        self.ops
            .iter()
            .position(|o| o.name == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn product(&self) -> Option<usize> {
        self.product
    }

    pub fn scalars(&self) -> Option<&ScalarBlock> {
        self.scalars.as_ref()
    }

    /// The field element whose scale operation is `op`, if any.
    pub fn scalar_of(&self, op: usize) -> Option<usize> {
        self.scalars.as_ref()?.ops.iter().position(|&o| o == op)
    }
}

/// A finite algebra: carrier `{0..size-1}` with one table per symbol.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    name: String,
    signature: Arc<Signature>,
    size: usize,
    tables: Vec<Vec<usize>>,
}

impl PartialEq for FiniteAlgebra {
    /// Structural equality; names are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.signature == other.signature && self.tables == other.tables
    }
}

impl Eq for FiniteAlgebra {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

/// A generated subalgebra together with its embedding into the parent.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub algebra: FiniteAlgebra,
    /// Parent element of each subalgebra element, ascending.
    pub embedding: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub projection: Homomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub separated: bool,
    /// First pair `a < b` (lexicographic) identified by every homomorphism.
    pub witness: Option<(usize, usize)>,
    pub hom_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    /// Index of the first failing law and the first failing assignment.
    pub counterexample: Option<(usize, Point)>,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Seed,
    Apply(usize),
}

pub(crate) fn tuple_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Decodes `index` into `out` as a base-`n` tuple, most significant first.
pub(crate) fn decode_tuple(n: usize, mut index: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Arc<Signature>,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<FiniteAlgebra> {
        let name = name.into();
        if size == 0 {
            return Err(Error::InvalidAlgebra(format!("{name}: carrier must be nonempty")));
        }
        if tables.len() != signature.ops().len() {
            return Err(Error::InvalidAlgebra(format!(
                "{name}: {} tables for {} symbols",
                tables.len(),
                signature.ops().len()
            )));
        }
        for (op, table) in signature.ops().iter().zip(&tables) {
            let expected = pow_u128(size, op.arity);
            if table.len() as u128 != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "{name}: table of `{}` has {} entries, expected {expected}",
                    op.name,
                    table.len()
                )));
            }
            if let Some(e) = table.iter().find(|&&e| e >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "{name}: table of `{}`: entry {e} out of range",
                    op.name
                )));
            }
        }
        Ok(FiniteAlgebra {
            name,
            signature,
            size,
            tables,
        })
    }

    /// Builds every table from a function of `(op index, arguments)`.
    pub fn from_fn<F>(
        name: impl Into<String>,
        signature: Arc<Signature>,
        size: usize,
        mut f: F,
    ) -> Result<FiniteAlgebra>
    where
        F: FnMut(usize, &[usize]) -> usize,
    {
        let mut tables = Vec::with_capacity(signature.ops().len());
        for (op, sym) in signature.ops().iter().enumerate() {
            let len = pow_u128(size, sym.arity) as usize;
            let mut args = vec![0; sym.arity];
            let mut table = Vec::with_capacity(len);
            for idx in 0..len {
                decode_tuple(size, idx, &mut args);
                table.push(f(op, &args));
            }
            tables.push(table);
        }
        FiniteAlgebra::new(name, signature, size, tables)
    }

    /// The one-element algebra of a signature.
    pub fn trivial(signature: Arc<Signature>) -> FiniteAlgebra {
        FiniteAlgebra::from_fn("1", signature, 1, |_, _| 0).expect("trivial algebra is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> FiniteAlgebra {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][tuple_index(self.size, args)]
    }

    /// Index of the value of each nullary symbol.
    pub fn constants(&self) -> Vec<usize> {
        self.signature
            .ops()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.arity == 0)
            .map(|(i, _)| self.tables[i][0])
            .collect()
    }

    pub fn eval(&self, term: &Term, point: &Point) -> Result<usize> {
        term.eval(self, point)
    }

    pub(crate) fn require_same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` have different signatures",
                self.name, other.name
            )));
        }
        Ok(())
    }

    /// Whether `map` preserves every operation, checked on every tuple.
    pub fn is_homomorphism(&self, target: &FiniteAlgebra, map: &[usize]) -> bool {
        if map.len() != self.size || map.iter().any(|&m| m >= target.size) {
            return false;
        }
        let mut args = Vec::new();
        let mut imgs = Vec::new();
        for (op, sym) in self.signature.ops().iter().enumerate() {
            args.resize(sym.arity, 0);
            imgs.resize(sym.arity, 0);
            for idx in 0..self.tables[op].len() {
                decode_tuple(self.size, idx, &mut args);
                for (i, &a) in args.iter().enumerate() {
                    imgs[i] = map[a];
                }
                if target.apply(op, &imgs) != map[self.tables[op][idx]] {
                    return false;
                }
            }
        }
        true
    }

    /// Breadth-first closure of `seed` and the constants; every element
    /// appears once with the step that produced it.
    fn generation_trace(&self, seed: &[usize]) -> Vec<(usize, Step, Vec<usize>)> {
        let n = self.size;
        let mut present = vec![false; n];
        let mut trace = Vec::new();
        for &s in seed {
            if !present[s] {
                present[s] = true;
                trace.push((s, Step::Seed, Vec::new()));
            }
        }
        for (op, sym) in self.signature.ops().iter().enumerate() {
            if sym.arity == 0 {
                let c = self.tables[op][0];
                if !present[c] {
                    present[c] = true;
                    trace.push((c, Step::Apply(op), Vec::new()));
                }
            }
        }
        let mut start = 0;
        let mut args = Vec::new();
        loop {
            let end = trace.len();
            if start == end {
                break;
            }
            let elems: Vec<usize> = trace.iter().map(|t| t.0).collect();
            for (op, sym) in self.signature.ops().iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                let count = pow_u128(end, sym.arity) as usize;
                args.resize(sym.arity, 0);
                for idx in 0..count {
                    decode_tuple(end, idx, &mut args);
                    if args.iter().all(|&a| a < start) {
                        continue;
                    }
                    let vals: Vec<usize> = args.iter().map(|&a| elems[a]).collect();
                    let r = self.apply(op, &vals);
                    if !present[r] {
                        present[r] = true;
                        trace.push((r, Step::Apply(op), vals));
                    }
                }
            }
            start = end;
        }
        trace
    }

    /// Greedy generating set: repeatedly adds the least element not yet
    /// generated.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.size];
        for (e, _, _) in self.generation_trace(&[]) {
            covered[e] = true;
        }
        while let Some(e) = covered.iter().position(|c| !c) {
            gens.push(e);
            covered = vec![false; self.size];
            for (x, _, _) in self.generation_trace(&gens) {
                covered[x] = true;
            }
        }
        gens
    }

    /// All homomorphisms into `target`, in lexicographic order of the map.
    ///
    /// A homomorphism is determined by its values on a generating set, so
    /// the search ranges over `|target|^|generators|` candidates, each
    /// extended along the generation trace and then checked on every tuple.
    pub fn enumerate_homs(&self, target: &FiniteAlgebra, caps: &Caps) -> Result<Vec<Homomorphism>> {
        self.require_same_signature(target)?;
        let gens = self.generating_set();
        let trace = self.generation_trace(&gens);
        let candidates = check_cap(
            "hom candidates",
            pow_u128(target.size, gens.len()),
            caps.homs,
        )?;
        let mut out = Vec::new();
        let mut gen_images = vec![0; gens.len()];
        let mut map = vec![usize::MAX; self.size];
        let mut imgs = Vec::new();
        'candidate: for idx in 0..candidates {
            decode_tuple(target.size, idx, &mut gen_images);
            map.iter_mut().for_each(|m| *m = usize::MAX);
            let mut next_gen = 0;
            for (e, step, args) in &trace {
                let img = match step {
                    Step::Seed => {
                        let g = gen_images[next_gen];
                        next_gen += 1;
                        g
                    }
                    Step::Apply(op) => {
                        imgs.clear();
                        imgs.extend(args.iter().map(|&a| map[a]));
                        target.apply(*op, &imgs)
                    }
                };
                if map[*e] != usize::MAX && map[*e] != img {
                    continue 'candidate;
                }
                map[*e] = img;
            }
            if self.is_homomorphism(target, &map) {
                out.push(Homomorphism { map: map.clone() });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Cartesian product with componentwise tables. A tuple
    /// `(a_1, ..., a_k)` is encoded in mixed radix with the first factor
    /// most significant. The empty product is the one-element algebra.
    pub fn product(
        signature: &Arc<Signature>,
        factors: &[&FiniteAlgebra],
        caps: &Caps,
    ) -> Result<FiniteAlgebra> {
        for f in factors {
            if f.signature != *signature {
                return Err(Error::SignatureMismatch(format!(
                    "factor `{}` has a different signature",
                    f.name
                )));
            }
        }
        if factors.is_empty() {
            return Ok(FiniteAlgebra::trivial(signature.clone()));
        }
        let size = check_cap(
            "product carrier",
            factors.iter().fold(1u128, |acc, f| acc.saturating_mul(f.size as u128)),
            caps.points,
        )?;
        let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
        let decode = |mut e: usize| -> Vec<usize> {
            let mut out = vec![0; radices.len()];
            for (slot, &r) in out.iter_mut().zip(&radices).rev() {
                *slot = e % r;
                e /= r;
            }
            out
        };
        let decoded: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let name = factors.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join("x");
        let mut comp_args = Vec::new();
        FiniteAlgebra::from_fn(name, signature.clone(), size, |op, args| {
            let mut out = 0;
            for (i, f) in factors.iter().enumerate() {
                comp_args.clear();
                comp_args.extend(args.iter().map(|&a| decoded[a][i]));
                out = out * radices[i] + f.apply(op, &comp_args);
            }
            out
        })
    }

    /// Least subalgebra containing `seed` and all constants, with induced
    /// tables; elements keep their relative order.
    pub fn subalgebra_generated(&self, seed: &[usize]) -> Result<Subalgebra> {
        if let Some(&e) = seed.iter().find(|&&e| e >= self.size) {
            return Err(Error::DomainMismatch(format!("seed element {e} out of range")));
        }
        let mut embedding: Vec<usize> = self.generation_trace(seed).into_iter().map(|t| t.0).collect();
        embedding.sort_unstable();
        if embedding.is_empty() {
            return Err(Error::InvalidAlgebra(
                "empty seed without constants generates the empty set".into(),
            ));
        }
        let mut index = vec![usize::MAX; self.size];
        for (i, &e) in embedding.iter().enumerate() {
            index[e] = i;
        }
        let mut parent_args = Vec::new();
        let algebra = FiniteAlgebra::from_fn(
            format!("<{}>", self.name),
            self.signature.clone(),
            embedding.len(),
            |op, args| {
                parent_args.clear();
                parent_args.extend(args.iter().map(|&a| embedding[a]));
                index[self.apply(op, &parent_args)]
            },
        )?;
        Ok(Subalgebra { algebra, embedding })
    }

    /// Quotient by a congruence; blocks are ordered by least representative.
    pub fn quotient(&self, theta: &Partition) -> Result<Quotient> {
        if theta.len() != self.size {
            return Err(Error::DomainMismatch(format!(
                "partition of {} elements on an algebra of {}",
                theta.len(),
                self.size
            )));
        }
        if let Some(why) = theta.compatibility_failure(self) {
            return Err(Error::NotCongruence(why));
        }
        let reps = theta.representatives();
        let mut parent_args = Vec::new();
        let algebra = FiniteAlgebra::from_fn(
            format!("{}/~", self.name),
            self.signature.clone(),
            theta.num_blocks(),
            |op, args| {
                parent_args.clear();
                parent_args.extend(args.iter().map(|&a| reps[a]));
                theta.block_of(self.apply(op, &parent_args))
            },
        )?;
        Ok(Quotient {
            algebra,
            projection: Homomorphism {
                map: theta.labels().to_vec(),
            },
        })
    }

    /// Whether homomorphisms into `target` separate the points of `self`,
    /// i.e. whether `self` lies in the prevariety generated by `target`.
    pub fn separates_points(&self, target: &FiniteAlgebra, caps: &Caps) -> Result<Separation> {
        let homs = self.enumerate_homs(target, caps)?;
        let kernel = Partition::from_keys(
            (0..self.size).map(|a| homs.iter().map(|h| h.map[a]).collect::<Vec<_>>()),
        );
        let mut witness = None;
        'outer: for a in 0..self.size {
            for b in a + 1..self.size {
                if kernel.same(a, b) {
                    witness = Some((a, b));
                    break 'outer;
                }
            }
        }
        Ok(Separation {
            separated: witness.is_none(),
            witness,
            hom_count: homs.len(),
        })
    }

    /// Checks identities under every assignment of their variables.
    pub fn check_laws(&self, laws: &[(Term, Term)]) -> Result<LawCheck> {
        for (i, (l, r)) in laws.iter().enumerate() {
            let mut vars = Vec::new();
            l.collect_vars(&mut vars);
            r.collect_vars(&mut vars);
            let count = pow_u128(self.size, vars.len()) as usize;
            for idx in 0..count {
                let point = Point::from_index(&vars, self.size, idx);
                if l.eval(self, &point)? != r.eval(self, &point)? {
                    return Ok(LawCheck {
                        holds: false,
                        counterexample: Some((i, point)),
                    });
                }
            }
        }
        Ok(LawCheck {
            holds: true,
            counterexample: None,
        })
    }

    /// A bijective homomorphism onto `other`, if one exists.
    pub fn find_isomorphism(&self, other: &FiniteAlgebra, caps: &Caps) -> Result<Option<Homomorphism>> {
        if self.size != other.size || self.signature != other.signature {
            return Ok(None);
        }
        let homs = self.enumerate_homs(other, caps)?;
        Ok(homs.into_iter().find(|h| {
            let mut seen = vec![false; other.size];
            h.map.iter().all(|&m| !std::mem::replace(&mut seen[m], true))
        }))
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (|H| = {})", self.name, self.size)
    }
}
