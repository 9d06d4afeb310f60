//! Equivalence relations on `{0..n-1}` and raw binary relations.

use std::collections::{BTreeSet, VecDeque};

use bitvec::prelude::*;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

/// A partition of `{0..n-1}` in canonical form: block labels are assigned in
/// order of least representative, so structural equality is equality of
/// equivalence relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labeling.
    pub fn from_labels<T: PartialEq + Clone>(labels: &[T]) -> Partition {
        let mut seen: Vec<T> = Vec::new();
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let id = match seen.iter().position(|s| s == l) {
                Some(i) => i,
                None => {
                    seen.push(l.clone());
                    seen.len() - 1
                }
            };
            out.push(id);
        }
        Partition {
            blocks: seen.len(),
            labels: out,
        }
    }

    /// Canonicalizes a labeling by hashable keys; linear time.
    pub fn from_keys<T: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = T>) -> Partition {
        let mut seen = std::collections::HashMap::new();
        let mut labels = Vec::new();
        for k in keys {
            let next = seen.len();
            labels.push(*seen.entry(k).or_insert(next));
        }
        Partition {
            blocks: seen.len(),
            labels,
        }
    }

    pub fn discrete(n: usize) -> Partition {
        Partition {
            labels: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn full(n: usize) -> Partition {
        Partition {
            labels: vec![0; n],
            blocks: usize::from(n > 0),
        }
    }

    /// Builds a partition from explicit blocks, which must cover `0..n`
    /// exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::DomainMismatch(format!("element {e} out of range {n}")));
                }
                if labels[e] != usize::MAX {
                    return Err(Error::DomainMismatch(format!("element {e} in two blocks")));
                }
                labels[e] = b;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::DomainMismatch(format!("element {e} in no block")));
        }
        Ok(Partition::from_keys(labels))
    }

    /// The equivalence relation generated by `pairs`.
    pub fn generated_by(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
        let mut uf = UnionFind::<usize>::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        Partition::from_keys((0..n).map(|i| uf.find_mut(i)))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.labels[e]
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (e, &l) in self.labels.iter().enumerate() {
            out[l].push(e);
        }
        out
    }

    /// Least element of each block, in block order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.blocks];
        for (e, &l) in self.labels.iter().enumerate() {
            if reps[l] == usize::MAX {
                reps[l] = e;
            }
        }
        reps
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks == self.labels.len()
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let mut image = vec![usize::MAX; self.blocks];
        for (e, &l) in self.labels.iter().enumerate() {
            if image[l] == usize::MAX {
                image[l] = other.labels[e];
            } else if image[l] != other.labels[e] {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_keys(self.labels.iter().zip(&other.labels).map(|(a, b)| (*a, *b)))
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut uf = UnionFind::<usize>::new(n);
        let first_self = self.representatives();
        for e in 0..n {
            uf.union(e, first_self[self.labels[e]]);
        }
        let first_other = other.representatives();
        for e in 0..n {
            uf.union(e, first_other[other.labels[e]]);
        }
        Partition::from_keys((0..n).map(|i| uf.find_mut(i)))
    }

    /// Relabels elements through a bijection: `a ~ b` in the result iff
    /// `perm^-1(a) ~ perm^-1(b)` here.
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let mut labels = vec![0; self.len()];
        for (e, &l) in self.labels.iter().enumerate() {
            labels[perm[e]] = l;
        }
        Partition::from_keys(labels)
    }

    /// Pullback along a map `f: {0..m-1} -> {0..n-1}`: `a ~ b` iff `f(a) ~ f(b)`.
    pub fn pullback(&self, f: &[usize]) -> Partition {
        Partition::from_keys(f.iter().map(|&x| self.labels[x]))
    }

    /// First operation/argument tuple witnessing that the partition is not
    /// compatible with `algebra`, if any.
    pub fn compatibility_failure(&self, algebra: &FiniteAlgebra) -> Option<String> {
        let n = algebra.size();
        assert_eq!(n, self.len(), "partition and algebra sizes differ");
        // Compatibility with every basic translation suffices.
        let reps = self.representatives();
        for (op, sym) in algebra.signature().ops().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let mut args = vec![0usize; sym.arity];
            for pos in 0..sym.arity {
                let others = crate::pow_u128(n, sym.arity - 1) as usize;
                for idx in 0..others {
                    let mut rest = idx;
                    for slot in (0..sym.arity).rev() {
                        if slot == pos {
                            continue;
                        }
                        args[slot] = rest % n;
                        rest /= n;
                    }
                    for e in 0..n {
                        let r = reps[self.labels[e]];
                        if r == e {
                            continue;
                        }
                        args[pos] = e;
                        let u = algebra.apply(op, &args);
                        args[pos] = r;
                        let v = algebra.apply(op, &args);
                        if !self.same(u, v) {
                            return Some(format!(
                                "{} is not compatible: {} ~ {} but images {} and {} are separated",
                                sym.name, e, r, u, v
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_congruence_of(&self, algebra: &FiniteAlgebra) -> bool {
        self.compatibility_failure(algebra).is_none()
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(serializer)
    }
}

/// The congruence of `algebra` generated by identifying `a` and `b`.
pub fn principal_congruence(algebra: &FiniteAlgebra, a: usize, b: usize) -> Partition {
    congruence_generated_by(algebra, [(a, b)])
}

/// The least congruence of `algebra` containing `pairs`.
pub fn congruence_generated_by(
    algebra: &FiniteAlgebra,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Partition {
    let n = algebra.size();
    let mut uf = UnionFind::<usize>::new(n);
    let mut queue = VecDeque::new();
    for (a, b) in pairs {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    let ops: Vec<(usize, usize)> = algebra
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity > 0)
        .map(|(i, s)| (i, s.arity))
        .collect();
    let mut args = Vec::new();
    while let Some((x, y)) = queue.pop_front() {
        for &(op, arity) in &ops {
            args.resize(arity, 0);
            let others = crate::pow_u128(n, arity - 1) as usize;
            for pos in 0..arity {
                for idx in 0..others {
                    let mut rest = idx;
                    for slot in (0..arity).rev() {
                        if slot == pos {
                            continue;
                        }
                        args[slot] = rest % n;
                        rest /= n;
                    }
                    args[pos] = x;
                    let u = algebra.apply(op, &args);
                    args[pos] = y;
                    let v = algebra.apply(op, &args);
                    if uf.union(u, v) {
                        queue.push_back((u, v));
                    }
                }
            }
        }
    }
    Partition::from_keys((0..n).map(|i| uf.find_mut(i)))
}

/// Every congruence of `algebra`, sorted by number of blocks descending
/// and then by labels. Fails when more than `cap` congruences exist.
pub fn all_congruences(algebra: &FiniteAlgebra, cap: usize) -> Result<Vec<Partition>> {
    let n = algebra.size();
    let mut principal = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principal.insert(principal_congruence(algebra, a, b));
        }
    }
    let principal: Vec<Partition> = principal.into_iter().collect();
    let mut found = BTreeSet::new();
    let mut queue = VecDeque::new();
    let bottom = Partition::discrete(n);
    found.insert(bottom.clone());
    queue.push_back(bottom);
    while let Some(c) = queue.pop_front() {
        for p in &principal {
            let j = c.join(p);
            if found.insert(j.clone()) {
                if found.len() > cap {
                    return Err(Error::cap("congruence count", found.len() as u128, cap));
                }
                queue.push_back(j);
            }
        }
    }
    let mut out: Vec<Partition> = found.into_iter().collect();
    out.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// A binary relation on `{0..n-1}` stored as an `n x n` bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: BitVec,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation {
            n,
            bits: bitvec![0; n * n],
        }
    }

    pub fn from_partition(p: &Partition) -> Relation {
        let mut r = Relation::empty(p.len());
        for block in p.blocks() {
            for &a in &block {
                for &b in &block {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits.set(a * self.n + b, true);
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.iter_ones().map(move |i| (i / self.n, i % self.n))
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && {
            // A reflexive symmetric relation is transitive iff it equals
            // the relation of its generated partition.
            Relation::from_partition(&self.equivalence_closure()) == *self
        }
    }

    /// The least equivalence relation containing this relation.
    pub fn equivalence_closure(&self) -> Partition {
        Partition::generated_by(self.n, self.pairs())
    }

    /// The relation as a partition when it already is an equivalence.
    pub fn to_partition(&self) -> Option<Partition> {
        if self.is_equivalence() {
            Some(self.equivalence_closure())
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&['b', 'a', 'b', 'c']);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.representatives(), vec![0, 1, 3]);
    }

    #[test]
    fn refinement_meet_join() {
        let a = Partition::from_blocks(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let b = Partition::from_blocks(4, &[vec![0], vec![1, 2], vec![3]]).unwrap();
        assert!(Partition::discrete(4).refines(&a));
        assert!(a.refines(&Partition::full(4)));
        assert!(!a.refines(&b));
        assert!(a.meet(&b).is_discrete());
        assert_eq!(a.join(&b).blocks(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn from_blocks_rejects_bad_cover() {
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 5], vec![1, 2]]).is_err());
    }

    #[test]
    fn relation_equivalence() {
        let p = Partition::from_blocks(3, &[vec![0, 2], vec![1]]).unwrap();
        let r = Relation::from_partition(&p);
        assert!(r.is_equivalence());
        assert_eq!(r.to_partition(), Some(p));
        let mut chain = Relation::empty(3);
        for a in 0..3 {
            chain.insert(a, a);
        }
        chain.insert(0, 1);
        chain.insert(1, 0);
        chain.insert(1, 2);
        chain.insert(2, 1);
        assert!(!chain.is_equivalence());
        assert_eq!(chain.equivalence_closure().num_blocks(), 1);
    }
}
