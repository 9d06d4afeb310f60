//! The Galois correspondence between equation systems and point sets.
//!
//! An [`AffineSpace`] fixes a free algebra `W = W(X)` and an algebra `H`
//! in its variety; points are the assignments `X -> H`, in lexicographic
//! order. A system `T` is read as a set of element pairs of `W`,
//! `T'` is its solution set, `A'` the kernel congruence of a point set,
//! and `T''`, `A''` the two closures.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use bitvec::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::free::FreeAlgebraRep;
use crate::partition::Partition;
use crate::term::{Point, Term};
use crate::{check_cap, pow_u128, Caps};

/// A finite set of equations over an ordered variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationSystem {
    pub vars: Vec<String>,
    pub pairs: Vec<(Term, Term)>,
}

impl EquationSystem {
    pub fn new(vars: Vec<String>, pairs: Vec<(Term, Term)>) -> Result<EquationSystem> {
        for (l, r) in &pairs {
            for v in l.variables().into_iter().chain(r.variables()) {
                if !vars.contains(&v) {
                    return Err(Error::UnboundVariable(v));
                }
            }
        }
        Ok(EquationSystem { vars, pairs })
    }

    pub fn empty(vars: Vec<String>) -> EquationSystem {
        EquationSystem {
            vars,
            pairs: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{ ")?;
        for (i, (l, r)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{l} = {r}")?;
        }
        write!(f, " }}")
    }
}

impl Serialize for EquationSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            vars: &'a [String],
            equations: Vec<[String; 2]>,
        }
        Repr {
            vars: &self.vars,
            equations: self
                .pairs
                .iter()
                .map(|(l, r)| [l.to_string(), r.to_string()])
                .collect(),
        }
        .serialize(serializer)
    }
}

/// A set of points of an affine space, as a bitset over point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    bits: BitVec,
}

impl PointSet {
    pub fn empty(n: usize) -> PointSet {
        PointSet { bits: bitvec![0; n] }
    }

    pub fn full(n: usize) -> PointSet {
        PointSet { bits: bitvec![1; n] }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = PointSet::empty(n);
        for i in indices {
            s.bits.set(i, true);
        }
        s
    }

    /// Size of the ambient space.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn is_full(&self) -> bool {
        self.bits.all()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.set(i, true);
    }

    pub fn indices(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.iter_ones().all(|i| other.bits[i])
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet {
            bits: self.bits.clone() & other.bits.as_bitslice(),
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet {
            bits: self.bits.clone() | other.bits.as_bitslice(),
        }
    }

    /// Canonical sort key: cardinality, then the sorted index list.
    pub(crate) fn key(&self) -> (usize, Vec<usize>) {
        (self.count(), self.indices())
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.bits.iter_ones())
    }
}

/// A closed congruence `T = T''` together with its solution set `T'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedCongruence {
    pub partition: Partition,
    pub points: PointSet,
}

/// Outcome of a generalized quasi-identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub holds: bool,
    pub counterexample: Option<Point>,
}

/// Outcome of a closedness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedCheck {
    pub congruence: bool,
    pub closed: bool,
    /// Which check failed and where.
    pub failure: Option<String>,
}

/// Whether the point `p` satisfies `w0 = w0'` whenever it satisfies every
/// equation of `system`, checked for every point of `H^X` by direct term
/// evaluation.
pub fn membership(
    h: &FiniteAlgebra,
    vars: &[String],
    system: &EquationSystem,
    w0: &Term,
    w0p: &Term,
    caps: &Caps,
) -> Result<Membership> {
    let points = check_cap("points", pow_u128(h.size(), vars.len()), caps.points)?;
    'points: for idx in 0..points {
        let p = Point::from_index(vars, h.size(), idx);
        for (l, r) in &system.pairs {
            if l.eval(h, &p)? != r.eval(h, &p)? {
                continue 'points;
            }
        }
        if w0.eval(h, &p)? != w0p.eval(h, &p)? {
            return Ok(Membership {
                holds: false,
                counterexample: Some(p),
            });
        }
    }
    Ok(Membership {
        holds: true,
        counterexample: None,
    })
}

/// `Hom(W(X), H)` with the free algebra `W(X)` of a variety containing `H`.
#[derive(Debug, Clone)]
pub struct AffineSpace {
    free: Arc<FreeAlgebraRep>,
    h: FiniteAlgebra,
    points: usize,
    /// `values[e * points + p]`: value of element `e` at point `p`.
    values: Vec<u16>,
}

impl AffineSpace {
    /// The space over `H` with `W = W(X)` of `Var(H)`.
    pub fn new(h: &FiniteAlgebra, vars: &[String], caps: &Caps) -> Result<AffineSpace> {
        let free = Arc::new(FreeAlgebraRep::new(h, vars, caps)?);
        AffineSpace::over(free, h, caps)
    }

    /// The space over `H` using a given free algebra; `H` must lie in the
    /// variety of its base.
    pub fn over(free: Arc<FreeAlgebraRep>, h: &FiniteAlgebra, caps: &Caps) -> Result<AffineSpace> {
        let points = check_cap("points", pow_u128(h.size(), free.vars().len()), caps.points)?;
        let values = if free.base() == h {
            (0..free.size()).flat_map(|e| free.values(e).iter().copied()).collect()
        } else {
            if h.size() > u16::MAX as usize {
                return Err(Error::cap("generator carrier", h.size() as u128, u16::MAX as usize));
            }
            free.values_in(h, caps)?
                .into_iter()
                .flat_map(|row| row.into_iter().map(|v| v as u16))
                .collect()
        };
        Ok(AffineSpace {
            free,
            h: h.clone(),
            points,
            values,
        })
    }

    pub fn free(&self) -> &Arc<FreeAlgebraRep> {
        &self.free
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.h
    }

    pub fn vars(&self) -> &[String] {
        self.free.vars()
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn num_elements(&self) -> usize {
        self.free.size()
    }

    pub fn point(&self, index: usize) -> Point {
        Point::from_index(self.free.vars(), self.h.size(), index)
    }

    pub fn value(&self, e: usize, p: usize) -> usize {
        self.values[e * self.points + p] as usize
    }

    fn row(&self, e: usize) -> &[u16] {
        &self.values[e * self.points..(e + 1) * self.points]
    }

    /// The element of `W` a term denotes.
    pub fn element_of(&self, t: &Term) -> Result<usize> {
        self.free.eval_term(t)
    }

    /// The system as element pairs of `W`.
    pub fn system_pairs(&self, system: &EquationSystem) -> Result<Vec<(usize, usize)>> {
        system
            .pairs
            .iter()
            .map(|(l, r)| Ok((self.element_of(l)?, self.element_of(r)?)))
            .collect()
    }

    /// Solution set of the single equation `e = f`.
    pub fn pair_solutions(&self, e: usize, f: usize) -> PointSet {
        let (a, b) = (self.row(e), self.row(f));
        PointSet {
            bits: a.iter().zip(b).map(|(x, y)| x == y).collect(),
        }
    }

    pub fn solve_pairs(&self, pairs: &[(usize, usize)]) -> PointSet {
        let mut s = PointSet::full(self.points);
        for &(e, f) in pairs {
            s = s.intersection(&self.pair_solutions(e, f));
        }
        s
    }

    /// `T'`.
    pub fn solve(&self, system: &EquationSystem) -> Result<PointSet> {
        Ok(self.solve_pairs(&self.system_pairs(system)?))
    }

    /// Solution set of a partition read as the equations between members of
    /// each block.
    pub fn solve_partition(&self, t: &Partition) -> PointSet {
        let reps = t.representatives();
        let mut s = PointSet::full(self.points);
        for e in 0..t.len() {
            let r = reps[t.block_of(e)];
            if r != e {
                s = s.intersection(&self.pair_solutions(e, r));
            }
        }
        s
    }

    /// `A'`: elements identified when they agree on every point of `A`.
    /// The empty set gives the full relation.
    pub fn kernel(&self, a: &PointSet) -> Partition {
        let pts = a.indices();
        Partition::from_keys(
            (0..self.free.size()).map(|e| pts.iter().map(|&p| self.value(e, p)).collect::<Vec<_>>()),
        )
    }

    pub fn closure_of_pairs(&self, pairs: &[(usize, usize)]) -> ClosedCongruence {
        let points = self.solve_pairs(pairs);
        ClosedCongruence {
            partition: self.kernel(&points),
            points,
        }
    }

    /// `T''`.
    pub fn closure_of_system(&self, system: &EquationSystem) -> Result<ClosedCongruence> {
        Ok(self.closure_of_pairs(&self.system_pairs(system)?))
    }

    pub fn closure_of_partition(&self, t: &Partition) -> ClosedCongruence {
        let points = self.solve_partition(t);
        ClosedCongruence {
            partition: self.kernel(&points),
            points,
        }
    }

    /// `A''`.
    pub fn closure_of_points(&self, a: &PointSet) -> PointSet {
        self.solve_partition(&self.kernel(a))
    }

    /// Generalized quasi-identity `T -> w0 = w0'`, evaluated directly in `H`.
    pub fn membership(
        &self,
        w0: &Term,
        w0p: &Term,
        system: &EquationSystem,
        caps: &Caps,
    ) -> Result<Membership> {
        membership(&self.h, self.free.vars(), system, w0, w0p, caps)
    }

    /// Whether `T` is a congruence of `W` and equals `T''`.
    pub fn is_closed(&self, t: &Partition) -> ClosedCheck {
        if t.len() != self.free.size() {
            return ClosedCheck {
                congruence: false,
                closed: false,
                failure: Some(format!(
                    "partition has {} elements, free algebra has {}",
                    t.len(),
                    self.free.size()
                )),
            };
        }
        if let Some(why) = t.compatibility_failure(self.free.algebra()) {
            return ClosedCheck {
                congruence: false,
                closed: false,
                failure: Some(format!("not a congruence: {why}")),
            };
        }
        let closure = self.closure_of_partition(t).partition;
        let extra = (0..t.len())
            .flat_map(|a| (a + 1..t.len()).map(move |b| (a, b)))
            .find(|&(a, b)| closure.same(a, b) && !t.same(a, b));
        match extra {
            None => ClosedCheck {
                congruence: true,
                closed: true,
                failure: None,
            },
            Some((a, b)) => ClosedCheck {
                congruence: true,
                closed: false,
                failure: Some(format!(
                    "not closed: {} = {} holds on the solution set",
                    self.free.term(a),
                    self.free.term(b)
                )),
            },
        }
    }

    /// The lattice of algebraic sets and, dually, of closed congruences.
    ///
    /// Closed sets are the intersections of single-equation solution sets
    /// together with the whole space. Nodes are sorted by cardinality, then
    /// by point indices.
    pub fn lattice(&self, caps: &Caps) -> Result<LatticeReport> {
        let n = self.free.size();
        check_cap("element pairs", (n as u128) * (n as u128) / 2, caps.pairs)?;
        let full = PointSet::full(self.points);
        let mut generators: Vec<(PointSet, (usize, usize))> = Vec::new();
        let mut seen_gen = HashSet::new();
        for e in 0..n {
            for f in e + 1..n {
                let s = self.pair_solutions(e, f);
                if seen_gen.insert(s.clone()) {
                    generators.push((s, (e, f)));
                }
            }
        }
        let mut family: HashSet<PointSet> = HashSet::new();
        family.insert(full.clone());
        let mut queue = vec![full.clone()];
        while let Some(a) = queue.pop() {
            for (g, _) in &generators {
                let b = a.intersection(g);
                if !family.contains(&b) {
                    check_cap("lattice nodes", family.len() as u128 + 1, caps.free)?;
                    family.insert(b.clone());
                    queue.push(b);
                }
            }
        }
        let mut sets: Vec<PointSet> = family.into_iter().collect();
        sets.sort_by_key(PointSet::key);
        let index: HashMap<PointSet, usize> =
            sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();

        let nodes: Vec<LatticeNode> = sets
            .iter()
            .map(|s| {
                let mut defining = Vec::new();
                if !s.is_full() {
                    let mut current = full.clone();
                    for (g, (e, f)) in &generators {
                        if s.is_subset(g) && !current.is_subset(g) {
                            current = current.intersection(g);
                            defining.push((self.free.term(*e), self.free.term(*f)));
                            if current == *s {
                                break;
                            }
                        }
                    }
                }
                let label = if defining.is_empty() {
                    let v = &self.free.vars()[0];
                    format!("{v} = {v}")
                } else {
                    defining
                        .iter()
                        .map(|(l, r)| format!("{l} = {r}"))
                        .collect::<Vec<_>>()
                        .join("; ")
                };
                LatticeNode {
                    points: s.clone(),
                    congruence: self.kernel(s),
                    equations: defining,
                    label,
                }
            })
            .collect();

        let m = nodes.len();
        let below: Vec<Vec<bool>> = (0..m)
            .map(|i| (0..m).map(|j| i != j && sets[i].is_subset(&sets[j])).collect())
            .collect();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if below[i][j] && !(0..m).any(|k| below[i][k] && below[k][j]) {
                    edges.push((i, j));
                }
            }
        }
        // nodes are sorted by cardinality, so every cover goes upward in index
        let mut longest = vec![1usize; m];
        let mut prev = vec![None; m];
        for j in 0..m {
            for &(a, b) in &edges {
                if b == j && longest[a] + 1 > longest[j] {
                    longest[j] = longest[a] + 1;
                    prev[j] = Some(a);
                }
            }
        }
        let top = (0..m).max_by_key(|&j| (longest[j], std::cmp::Reverse(j))).unwrap_or(0);
        let mut chain = vec![top];
        while let Some(p) = prev[*chain.last().unwrap()] {
            chain.push(p);
        }
        chain.reverse();

        let mut meet = vec![vec![0; m]; m];
        let mut join = vec![vec![0; m]; m];
        for i in 0..m {
            for j in 0..m {
                meet[i][j] = index[&sets[i].intersection(&sets[j])];
                let u = sets[i].union(&sets[j]);
                join[i][j] = (0..m).find(|&k| u.is_subset(&sets[k])).expect("full space is a node");
            }
        }
        let empty_is_closed = sets.first().is_some_and(PointSet::is_empty);
        Ok(LatticeReport {
            algebra: self.h.name().to_string(),
            vars: self.free.vars().to_vec(),
            free_size: n,
            num_points: self.points,
            nodes,
            edges,
            height: longest.iter().max().copied().unwrap_or(1) - 1,
            longest_chain: chain,
            meet,
            join,
            empty_is_closed,
        })
    }

    /// Whether `A -> A'` is an order-reversing bijection from the set
    /// lattice onto the congruence lattice with inverse `T -> T'`.
    pub fn lattice_duality_holds(&self, report: &LatticeReport) -> bool {
        let nodes = &report.nodes;
        for a in nodes {
            if self.kernel(&a.points) != a.congruence
                || self.solve_partition(&a.congruence) != a.points
                || !self.is_closed(&a.congruence).closed
            {
                return false;
            }
        }
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate() {
                if i != j && a.congruence == b.congruence {
                    return false;
                }
                if a.points.is_subset(&b.points) != b.congruence.refines(&a.congruence) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeNode {
    pub points: PointSet,
    pub congruence: Partition,
    /// Defining equations chosen greedily among single-pair solution sets;
    /// empty for the whole space.
    pub equations: Vec<(Term, Term)>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub algebra: String,
    pub vars: Vec<String>,
    pub free_size: usize,
    pub num_points: usize,
    pub nodes: Vec<LatticeNode>,
    /// Covers `(lower, upper)` of set inclusion.
    pub edges: Vec<(usize, usize)>,
    pub height: usize,
    /// Node indices of a longest chain, smallest set first.
    pub longest_chain: Vec<usize>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub empty_is_closed: bool,
}

impl LatticeReport {
    /// Graphviz rendering of the Hasse diagram, larger sets on top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let pts = n
                .points
                .indices()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "  n{i} [label=\"{}\\n{{{pts}}}\"];\n",
                n.label.replace('"', "\\\"")
            ));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Chain statistics for the closed-congruence lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccReport {
    /// Nodes on a longest chain.
    pub max_chain_length: usize,
    /// Every ascending chain of closed congruences stabilizes; always true
    /// for a finite lattice.
    pub stabilizes: bool,
    /// A longest ascending chain of closed congruences, as node indices
    /// (decreasing point sets).
    pub chain: Vec<usize>,
}

pub fn acc_report(lattice: &LatticeReport) -> AccReport {
    let mut chain = lattice.longest_chain.clone();
    chain.reverse();
    AccReport {
        max_chain_length: chain.len(),
        stabilizes: true,
        chain,
    }
}
