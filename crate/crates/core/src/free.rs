//! Finitely generated free algebras of `Var(H)`.
//!
//! The free algebra `W(X)` of the variety generated by a finite `H` embeds
//! in `H^(H^X)`: two terms are identified exactly when they define the same
//! function `H^X -> H`. An element is stored as its value vector over the
//! points of `H^X` (lexicographic, first variable most significant).

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{decode_tuple, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::{Point, Term};
use crate::{check_cap, pow_u128, Caps};

/// How an element was first reached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Construction {
    Var(usize),
    Op(usize, Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct FreeAlgebraRep {
    base: FiniteAlgebra,
    vars: Vec<String>,
    points: usize,
    values: Vec<u16>,
    index: HashMap<Box<[u16]>, usize>,
    construction: Vec<Construction>,
    depth: Vec<usize>,
    generators: Vec<usize>,
    algebra: FiniteAlgebra,
}

impl FreeAlgebraRep {
    /// Builds `W(X)` by breadth-first closure.
    ///
    /// Depth 0 holds the projections in variable order, then the nullary
    /// symbols in signature order. Round `r` applies each symbol in
    /// signature order to every lexicographic tuple of already known
    /// elements containing at least one element found in round `r - 1`;
    /// new value vectors are appended. Each element keeps the first term
    /// that reached it as its canonical witness.
    pub fn new(base: &FiniteAlgebra, vars: &[String], caps: &Caps) -> Result<FreeAlgebraRep> {
        if vars.is_empty() {
            return Err(Error::EmptyVariables);
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DomainMismatch(format!("variable `{v}` repeated")));
            }
        }
        if base.size() > u16::MAX as usize {
            return Err(Error::cap("generator carrier", base.size() as u128, u16::MAX as usize));
        }
        let points = check_cap("points", pow_u128(base.size(), vars.len()), caps.points)?;
        let n = base.size();
        let sig = base.signature().clone();

        let mut rep = FreeAlgebraRep {
            base: base.clone(),
            vars: vars.to_vec(),
            points,
            values: Vec::new(),
            index: HashMap::new(),
            construction: Vec::new(),
            depth: Vec::new(),
            generators: Vec::new(),
            algebra: FiniteAlgebra::trivial(sig.clone()),
        };

        let mut coords = vec![0; vars.len()];
        let mut proj: Vec<Vec<u16>> = vec![Vec::with_capacity(points); vars.len()];
        for p in 0..points {
            decode_tuple(n, p, &mut coords);
            for (i, &c) in coords.iter().enumerate() {
                proj[i].push(c as u16);
            }
        }
        for (i, v) in proj.into_iter().enumerate() {
            let e = rep.insert(v, Construction::Var(i), 0, caps)?;
            rep.generators.push(e);
        }
        for (op, sym) in sig.ops().iter().enumerate() {
            if sym.arity == 0 {
                let c = base.apply(op, &[]) as u16;
                rep.insert(vec![c; points], Construction::Op(op, Vec::new()), 0, caps)?;
            }
        }

        let mut start = 0;
        let mut round = 0;
        let mut args = Vec::new();
        let mut vals = Vec::new();
        let mut scratch = vec![0u16; points];
        loop {
            let end = rep.size();
            if start == end {
                break;
            }
            round += 1;
            for (op, sym) in sig.ops().iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                let count = check_cap("free tuples", pow_u128(end, sym.arity), usize::MAX >> 1)?;
                args.resize(sym.arity, 0);
                vals.resize(sym.arity, 0);
                for idx in 0..count {
                    decode_tuple(end, idx, &mut args);
                    if args.iter().all(|&a| a < start) {
                        continue;
                    }
                    rep.apply_vectors(op, &args, &mut vals, &mut scratch);
                    if !rep.index.contains_key(scratch.as_slice()) {
                        rep.insert(scratch.clone(), Construction::Op(op, args.clone()), round, caps)?;
                    }
                }
            }
            start = end;
        }

        let size = rep.size();
        let mut vals = Vec::new();
        let mut tables = Vec::with_capacity(sig.ops().len());
        for (op, sym) in sig.ops().iter().enumerate() {
            let count = check_cap("free tuples", pow_u128(size, sym.arity), usize::MAX >> 1)?;
            let mut table = Vec::with_capacity(count);
            args.resize(sym.arity, 0);
            vals.resize(sym.arity, 0);
            for idx in 0..count {
                decode_tuple(size, idx, &mut args);
                rep.apply_vectors(op, &args, &mut vals, &mut scratch);
                table.push(rep.index[scratch.as_slice()]);
            }
            tables.push(table);
        }
        let name = format!("W{{{}}}", vars.join(","));
        rep.algebra = FiniteAlgebra::new(name, sig, size, tables)?;
        Ok(rep)
    }

    fn insert(&mut self, v: Vec<u16>, c: Construction, depth: usize, caps: &Caps) -> Result<usize> {
        if let Some(&e) = self.index.get(v.as_slice()) {
            return Ok(e);
        }
        let e = self.construction.len();
        if e + 1 > caps.free {
            return Err(Error::cap("free algebra", (e + 1) as u128, caps.free));
        }
        self.values.extend_from_slice(&v);
        self.index.insert(v.into_boxed_slice(), e);
        self.construction.push(c);
        self.depth.push(depth);
        Ok(e)
    }

    fn apply_vectors(&self, op: usize, args: &[usize], vals: &mut [usize], out: &mut [u16]) {
        for (p, slot) in out.iter_mut().enumerate() {
            for (i, &a) in args.iter().enumerate() {
                vals[i] = self.values[a * self.points + p] as usize;
            }
            *slot = self.base.apply(op, vals) as u16;
        }
    }

    pub fn size(&self) -> usize {
        self.construction.len()
    }

    /// The algebra whose variety this is the free algebra of.
    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// `|H|^|X|`.
    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn point(&self, index: usize) -> Point {
        Point::from_index(&self.vars, self.base.size(), index)
    }

    /// `W(X)` as a finite algebra over element indices.
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn values(&self, e: usize) -> &[u16] {
        &self.values[e * self.points..(e + 1) * self.points]
    }

    pub fn value_at(&self, e: usize, point: usize) -> usize {
        self.values[e * self.points + point] as usize
    }

    pub fn element_of_values(&self, v: &[u16]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn construction(&self, e: usize) -> &Construction {
        &self.construction[e]
    }

    pub fn depth(&self, e: usize) -> usize {
        self.depth[e]
    }

    /// The element of the `i`-th variable.
    pub fn generator(&self, i: usize) -> usize {
        self.generators[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Canonical witness term of an element.
    pub fn term(&self, e: usize) -> Term {
        let sig = self.base.signature();
        match &self.construction[e] {
            Construction::Var(i) => Term::var(self.vars[*i].clone()),
            Construction::Op(op, args) => Term::app(
                sig.ops()[*op].name.clone(),
                args.iter().map(|&a| self.term(a)).collect(),
            ),
        }
    }

    /// The element a term denotes. Variables outside `X` are rejected.
    pub fn eval_term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Var(v) => self
                .vars
                .iter()
                .position(|x| x == v)
                .map(|i| self.generators[i])
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(s, args) => {
                let sig = self.base.signature();
                let op = sig.op_index(s)?;
                let arity = sig.ops()[op].arity;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_term(a)?);
                }
                Ok(self.algebra.apply(op, &vals))
            }
        }
    }

    /// Value of every element at every point of `K^X`, by evaluating the
    /// witnesses in `K` (which must lie in the variety for the result to be
    /// meaningful). Row `e` has length `|K|^|X|`.
    pub fn values_in(&self, k: &FiniteAlgebra, caps: &Caps) -> Result<Vec<Vec<usize>>> {
        self.base.require_same_signature(k)?;
        let points = check_cap("points", pow_u128(k.size(), self.vars.len()), caps.points)?;
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(self.size());
        let mut coords = vec![0; self.vars.len()];
        let mut vals = Vec::new();
        for c in &self.construction {
            let row = match c {
                Construction::Var(i) => (0..points)
                    .map(|p| {
                        decode_tuple(k.size(), p, &mut coords);
                        coords[*i]
                    })
                    .collect(),
                Construction::Op(op, args) => (0..points)
                    .map(|p| {
                        vals.clear();
                        vals.extend(args.iter().map(|&a| rows[a][p]));
                        k.apply(*op, &vals)
                    })
                    .collect(),
            };
            rows.push(row);
        }
        Ok(rows)
    }

    /// Elements as functions, printed for reports.
    pub fn describe(&self, e: usize) -> String {
        self.term(e).to_string()
    }
}

/// A homomorphism `W(X) -> W(Y)` of free algebras of the same variety,
/// fixed by the images of the generators.
#[derive(Debug, Clone)]
pub struct FreeMorphism {
    source: Arc<FreeAlgebraRep>,
    target: Arc<FreeAlgebraRep>,
    images: Vec<usize>,
    element_map: Vec<usize>,
}

impl PartialEq for FreeMorphism {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.source, &other.source)
            && Arc::ptr_eq(&self.target, &other.target)
            && self.images == other.images
    }
}

impl Eq for FreeMorphism {}

impl FreeMorphism {
    pub fn new(
        source: Arc<FreeAlgebraRep>,
        target: Arc<FreeAlgebraRep>,
        images: Vec<usize>,
    ) -> Result<FreeMorphism> {
        if source.base != target.base {
            return Err(Error::DomainMismatch(
                "free algebras of different varieties".into(),
            ));
        }
        if images.len() != source.vars.len() {
            return Err(Error::DomainMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.vars.len()
            )));
        }
        if let Some(&e) = images.iter().find(|&&e| e >= target.size()) {
            return Err(Error::DomainMismatch(format!("image {e} out of range")));
        }
        let element_map = Self::extend(&source, &target, &images);
        Ok(FreeMorphism {
            source,
            target,
            images,
            element_map,
        })
    }

    fn extend(source: &FreeAlgebraRep, target: &FreeAlgebraRep, images: &[usize]) -> Vec<usize> {
        let mut map: Vec<usize> = Vec::with_capacity(source.size());
        let mut vals = Vec::new();
        for c in &source.construction {
            let img = match c {
                Construction::Var(i) => images[*i],
                Construction::Op(op, args) => {
                    vals.clear();
                    vals.extend(args.iter().map(|&a| map[a]));
                    target.algebra.apply(*op, &vals)
                }
            };
            map.push(img);
        }
        map
    }

    pub fn identity(w: Arc<FreeAlgebraRep>) -> FreeMorphism {
        let images = w.generators.clone();
        FreeMorphism::new(w.clone(), w, images).expect("identity morphism")
    }

    /// Images given as terms over the target variables.
    pub fn from_terms(
        source: Arc<FreeAlgebraRep>,
        target: Arc<FreeAlgebraRep>,
        terms: &[Term],
    ) -> Result<FreeMorphism> {
        let images = terms.iter().map(|t| target.eval_term(t)).collect::<Result<Vec<_>>>()?;
        FreeMorphism::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<FreeAlgebraRep> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeAlgebraRep> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of every source element.
    pub fn element_map(&self) -> &[usize] {
        &self.element_map
    }

    pub fn apply(&self, e: usize) -> usize {
        self.element_map[e]
    }

    /// `second . first`.
    pub fn compose(second: &FreeMorphism, first: &FreeMorphism) -> Result<FreeMorphism> {
        if !Arc::ptr_eq(&first.target, &second.source) {
            return Err(Error::DomainMismatch("morphisms are not composable".into()));
        }
        let images = first.images.iter().map(|&e| second.element_map[e]).collect();
        FreeMorphism::new(first.source.clone(), second.target.clone(), images)
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.size() != self.target.size() {
            return false;
        }
        let mut seen = vec![false; self.target.size()];
        self.element_map.iter().all(|&m| !std::mem::replace(&mut seen[m], true))
    }

    /// Inverse of a bijective morphism.
    pub fn inverse(&self) -> Result<FreeMorphism> {
        if !self.is_bijective() {
            return Err(Error::DomainMismatch("morphism is not invertible".into()));
        }
        let mut inv = vec![0; self.target.size()];
        for (a, &b) in self.element_map.iter().enumerate() {
            inv[b] = a;
        }
        let images = self.target.generators.iter().map(|&g| inv[g]).collect();
        FreeMorphism::new(self.target.clone(), self.source.clone(), images)
    }

    /// The point of `H^X` obtained by precomposing the point `b` of `H^Y`:
    /// coordinate `i` is the value of `s(x_i)` at `b`.
    pub fn pull_point(&self, b: usize) -> usize {
        let n = self.source.base.size();
        self.images
            .iter()
            .fold(0, |acc, &e| acc * n + self.target.value_at(e, b))
    }

    /// Image terms of the generators.
    pub fn image_terms(&self) -> Vec<Term> {
        self.images.iter().map(|&e| self.target.term(e)).collect()
    }

    /// Every morphism `source -> target`, in lexicographic order of the
    /// generator images.
    pub fn all(
        source: &Arc<FreeAlgebraRep>,
        target: &Arc<FreeAlgebraRep>,
        caps: &Caps,
    ) -> Result<Vec<FreeMorphism>> {
        let count = check_cap(
            "free morphisms",
            pow_u128(target.size(), source.vars.len()),
            caps.homs,
        )?;
        let mut images = vec![0; source.vars.len()];
        let mut out = Vec::with_capacity(count);
        for idx in 0..count {
            decode_tuple(target.size(), idx, &mut images);
            out.push(FreeMorphism::new(source.clone(), target.clone(), images.clone())?);
        }
        Ok(out)
    }
}
