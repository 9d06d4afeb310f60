//! Hom relations `beta`, `rho`, `tau`, the action of category automorphisms
//! on closed congruences, and bounded slices of the category of algebraic
//! sets.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::equiv::{semi_automorphism, FieldAutomorphism};
use crate::error::{Error, Result};
use crate::free::{FreeAlgebraRep, FreeMorphism};
use crate::galois::{AffineSpace, PointSet};
use crate::partition::{Partition, Relation};
use crate::Caps;

/// All morphisms `W1 -> W2`, lexicographic in the generator images.
pub fn hom_set(w1: &Arc<FreeAlgebraRep>, w2: &Arc<FreeAlgebraRep>, caps: &Caps) -> Result<Vec<FreeMorphism>> {
    FreeMorphism::all(w1, w2, caps)
}

/// Position of a morphism in [`hom_set`] order.
fn hom_index(s: &FreeMorphism) -> usize {
    let n = s.target().size();
    s.images().iter().fold(0, |acc, &e| acc * n + e)
}

/// A binary relation on an enumerated hom set.
#[derive(Debug, Clone)]
pub struct HomRelation {
    pub source: Arc<FreeAlgebraRep>,
    pub target: Arc<FreeAlgebraRep>,
    pub homs: Vec<FreeMorphism>,
    pub relation: Relation,
}

impl HomRelation {
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.relation.contains(i, j)
    }
}

/// `s1 ~ s2` iff `s1(w) T s2(w)` for every element `w` of `W1`.
pub fn beta(
    w1: &Arc<FreeAlgebraRep>,
    w2: &Arc<FreeAlgebraRep>,
    t: &Partition,
    caps: &Caps,
) -> Result<HomRelation> {
    if t.len() != w2.size() {
        return Err(Error::DomainMismatch("partition is not on the target".into()));
    }
    let homs = hom_set(w1, w2, caps)?;
    let classes = Partition::from_keys(homs.iter().map(|s| {
        s.element_map().iter().map(|&e| t.block_of(e)).collect::<Vec<_>>()
    }));
    Ok(HomRelation {
        source: w1.clone(),
        target: w2.clone(),
        homs,
        relation: Relation::from_partition(&classes),
    })
}

/// `rho_W(T) = beta_{W,W}(T)`.
pub fn rho(w: &Arc<FreeAlgebraRep>, t: &Partition, caps: &Caps) -> Result<HomRelation> {
    beta(w, w, t, caps)
}

/// `w1 ~ w2` iff `w1 = nu(w)`, `w2 = nu'(w)` for some `w` and `nu r nu'`.
/// The relation is returned as generated; with `strict` its equivalence
/// closure is returned instead.
pub fn tau(r: &HomRelation, strict: bool) -> Relation {
    let w = &r.source;
    let n = w.size();
    let mut out = Relation::empty(r.target.size());
    if let Some(classes) = r.relation.to_partition() {
        // pairs inside one class: the images of w form a full square
        let mut seen = vec![false; r.target.size()];
        for block in classes.blocks() {
            for e in 0..n {
                let mut values = Vec::new();
                for &i in &block {
                    let v = r.homs[i].apply(e);
                    if !std::mem::replace(&mut seen[v], true) {
                        values.push(v);
                    }
                }
                for &a in &values {
                    for &b in &values {
                        out.insert(a, b);
                    }
                    seen[a] = false;
                }
            }
        }
    } else {
        for (i, j) in r.relation.pairs() {
            for e in 0..n {
                out.insert(r.homs[i].apply(e), r.homs[j].apply(e));
            }
        }
    }
    if strict {
        Relation::from_partition(&out.equivalence_closure())
    } else {
        out
    }
}

/// `Cl_H(s)(T) = s^-1 T`.
pub fn cl_on_morphism(s: &FreeMorphism, t: &Partition) -> Partition {
    t.pullback(s.element_map())
}

/// Isomorphisms `s_W: W -> W`, one per object of a bounded object set.
#[derive(Debug, Clone)]
pub struct InnerFamily {
    morphisms: Vec<FreeMorphism>,
}

impl InnerFamily {
    pub fn new(morphisms: Vec<FreeMorphism>) -> Result<InnerFamily> {
        for s in &morphisms {
            if !Arc::ptr_eq(s.source(), s.target()) {
                return Err(Error::IllFormedAutomorphism(
                    "s_W must be an endomorphism of W".into(),
                ));
            }
            if !s.is_bijective() {
                return Err(Error::IllFormedAutomorphism(format!(
                    "s_W on W({}) is not an isomorphism",
                    s.source().vars().join(",")
                )));
            }
        }
        Ok(InnerFamily { morphisms })
    }

    /// Identity on every object.
    pub fn identity(objects: &[Arc<FreeAlgebraRep>]) -> InnerFamily {
        InnerFamily {
            morphisms: objects.iter().map(|w| FreeMorphism::identity(w.clone())).collect(),
        }
    }

    /// Swaps the first two generators of every object with at least two;
    /// identity on the others.
    pub fn transposition(objects: &[Arc<FreeAlgebraRep>]) -> Result<InnerFamily> {
        let morphisms = objects
            .iter()
            .map(|w| {
                let mut images = w.generators().to_vec();
                if images.len() >= 2 {
                    images.swap(0, 1);
                }
                FreeMorphism::new(w.clone(), w.clone(), images)
            })
            .collect::<Result<Vec<_>>>()?;
        InnerFamily::new(morphisms)
    }

    pub fn objects(&self) -> Vec<Arc<FreeAlgebraRep>> {
        self.morphisms.iter().map(|s| s.source().clone()).collect()
    }

    pub fn at(&self, w: &Arc<FreeAlgebraRep>) -> Result<&FreeMorphism> {
        self.morphisms
            .iter()
            .find(|s| Arc::ptr_eq(s.source(), w))
            .ok_or_else(|| Error::IllFormedAutomorphism("object outside the family".into()))
    }
}

/// An automorphism of the category of free algebras, restricted to what is
/// needed to act on endomorphism sets. Every kind fixes objects.
#[derive(Debug, Clone)]
pub enum AutomorphismSpec {
    Identity,
    /// `phi(nu) = s_W nu s_W^-1`.
    Inner(InnerFamily),
    /// `phi(nu) = sigma_W nu sigma_W^-1`, with `sigma_W` twisting scalars.
    ScalarTwist(FieldAutomorphism),
    /// Applied first to last.
    Composite(Vec<AutomorphismSpec>),
}

impl AutomorphismSpec {
    /// Element permutation `W -> W` conjugating arrows, if any.
    fn conjugator(&self, w: &Arc<FreeAlgebraRep>) -> Result<Option<Vec<usize>>> {
        match self {
            AutomorphismSpec::Identity => Ok(None),
            AutomorphismSpec::Inner(f) => Ok(Some(f.at(w)?.element_map().to_vec())),
            AutomorphismSpec::ScalarTwist(sigma) => Ok(Some(semi_automorphism(w, sigma)?)),
            AutomorphismSpec::Composite(parts) => {
                let mut acc: Option<Vec<usize>> = None;
                for p in parts {
                    if let Some(c) = p.conjugator(w)? {
                        acc = Some(match acc {
                            None => c,
                            Some(prev) => prev.iter().map(|&e| c[e]).collect(),
                        });
                    }
                }
                Ok(acc)
            }
        }
    }

    /// The image of every endomorphism of `W`, as [`hom_set`] indices.
    pub fn act_on_endos(&self, w: &Arc<FreeAlgebraRep>, endos: &[FreeMorphism]) -> Result<Vec<usize>> {
        let Some(c) = self.conjugator(w)? else {
            return Ok((0..endos.len()).collect());
        };
        let mut inv = vec![0; c.len()];
        for (a, &b) in c.iter().enumerate() {
            inv[b] = a;
        }
        endos
            .iter()
            .map(|nu| {
                let images = w.generators().iter().map(|&g| c[nu.apply(inv[g])]).collect();
                let phi_nu = FreeMorphism::new(w.clone(), w.clone(), images)?;
                // conjugation must be a homomorphism again
                let expected: Vec<usize> = (0..w.size()).map(|e| c[nu.apply(inv[e])]).collect();
                if phi_nu.element_map() != expected.as_slice() {
                    return Err(Error::IllFormedAutomorphism(
                        "conjugated arrow is not a homomorphism".into(),
                    ));
                }
                Ok(hom_index(&phi_nu))
            })
            .collect()
    }

    /// `T -> c T` for the conjugating permutation (`T` itself if none).
    pub fn transport(&self, w: &Arc<FreeAlgebraRep>, t: &Partition) -> Result<Partition> {
        Ok(match self.conjugator(w)? {
            Some(c) => t.permuted(&c),
            None => t.clone(),
        })
    }
}

/// `alpha(phi)_W(T) = tau_W phi(rho_W(T))`. Fails if the result is not an
/// equivalence.
pub fn alpha(phi: &AutomorphismSpec, w: &Arc<FreeAlgebraRep>, t: &Partition, caps: &Caps) -> Result<Partition> {
    let r = rho(w, t, caps)?;
    let image = phi.act_on_endos(w, &r.homs)?;
    let mut moved = Relation::empty(r.homs.len());
    for (i, j) in r.relation.pairs() {
        moved.insert(image[i], image[j]);
    }
    let transported = HomRelation {
        relation: moved,
        ..r
    };
    tau(&transported, false).to_partition().ok_or_else(|| {
        Error::IllFormedAutomorphism("tau of the transported relation is not an equivalence".into())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InnerReport {
    pub holds: bool,
    pub objects: usize,
    pub congruences_checked: usize,
    pub failure: Option<String>,
}

/// For every object `W` of the family and every `H`-closed `T` on it:
/// `alpha(phi)_W(T) = s_W T`, and `s_W T` is `H`-closed.
pub fn verify_inner_equivalence(family: &InnerFamily, caps: &Caps) -> Result<InnerReport> {
    let phi = AutomorphismSpec::Inner(family.clone());
    let mut checked = 0;
    let objects = family.objects();
    for w in &objects {
        let space = AffineSpace::over(w.clone(), w.base(), caps)?;
        let s = family.at(w)?;
        for node in space.lattice(caps)?.nodes {
            checked += 1;
            let a = alpha(&phi, w, &node.congruence, caps)?;
            let moved = node.congruence.permuted(s.element_map());
            let failure = if a != moved {
                Some("alpha(phi)_W(T) differs from s_W T")
            } else if !space.is_closed(&moved).closed {
                Some("s_W T is not closed")
            } else {
                None
            };
            if let Some(f) = failure {
                return Ok(InnerReport {
                    holds: false,
                    objects: objects.len(),
                    congruences_checked: checked,
                    failure: Some(format!("{f} on W({}) at T = [{}]", w.vars().join(","), node.label)),
                });
            }
        }
    }
    Ok(InnerReport {
        holds: true,
        objects: objects.len(),
        congruences_checked: checked,
        failure: None,
    })
}

/// An object `(X, A)` with its dual quotient `W(X)/A'`.
#[derive(Debug, Clone, Serialize)]
pub struct CatObject {
    pub vars: Vec<String>,
    pub points: PointSet,
    pub label: String,
    #[serde(skip)]
    pub space_index: usize,
    #[serde(skip)]
    pub congruence: Partition,
    #[serde(skip)]
    pub dual: FiniteAlgebra,
    pub dual_size: usize,
}

/// An arrow `(X, A) -> (Y, B)`: the point map `A -> B` induced by some
/// `s: W(Y) -> W(X)`, which is kept as a witness.
#[derive(Debug, Clone, Serialize)]
pub struct CatArrow {
    pub source: usize,
    pub target: usize,
    /// Image (point index in `H^Y`) of each point of `A`, in increasing order.
    pub map: Vec<usize>,
    #[serde(skip)]
    pub witness: FreeMorphism,
    pub witness_images: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CategorySlice {
    pub algebra: String,
    pub max_vars: usize,
    pub objects: Vec<CatObject>,
    pub arrows: Vec<CatArrow>,
    /// `(f, g, g . f)` for every composable pair.
    pub composition: Vec<(usize, usize, usize)>,
    /// Index of the identity arrow of each object.
    pub identities: Vec<usize>,
    /// Isomorphism classes of objects.
    pub skeleton: Vec<Vec<usize>>,
    #[serde(skip)]
    spaces: Vec<AffineSpace>,
}

/// Objects `(X, A)` for `|X| <= max_vars` and every algebraic set `A`;
/// arrows are the distinct point maps induced by morphisms of free
/// algebras.
pub fn build_category(h: &FiniteAlgebra, max_vars: usize, caps: &Caps) -> Result<CategorySlice> {
    if max_vars == 0 {
        return Err(Error::EmptyVariables);
    }
    let mut spaces = Vec::new();
    let mut objects = Vec::new();
    for k in 1..=max_vars {
        let vars: Vec<String> = ["x", "y", "z", "u", "v", "w"]
            .iter()
            .take(k)
            .map(|s| s.to_string())
            .collect();
        if vars.len() < k {
            return Err(Error::cap("category variables", k as u128, 6));
        }
        let space = AffineSpace::new(h, &vars, caps)?;
        for node in space.lattice(caps)?.nodes {
            let dual = space.free().algebra().quotient(&node.congruence)?.algebra;
            objects.push(CatObject {
                vars: vars.clone(),
                label: node.label.clone(),
                space_index: spaces.len(),
                dual_size: dual.size(),
                dual,
                points: node.points,
                congruence: node.congruence,
            });
        }
        spaces.push(space);
    }

    let mut arrows = Vec::new();
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (oi, a) in objects.iter().enumerate() {
        let w_x = spaces[a.space_index].free().clone();
        let a_pts = a.points.indices();
        for (oj, b) in objects.iter().enumerate() {
            let w_y = spaces[b.space_index].free().clone();
            let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
            for s in hom_set(&w_y, &w_x, caps)? {
                let map: Vec<usize> = a_pts.iter().map(|&p| s.pull_point(p)).collect();
                if map.iter().all(|&q| b.points.contains(q)) && !seen.contains_key(&map) {
                    seen.insert(map.clone(), arrows.len());
                    by_pair.entry((oi, oj)).or_default().push(arrows.len());
                    arrows.push(CatArrow {
                        source: oi,
                        target: oj,
                        map,
                        witness_images: s.image_terms().iter().map(ToString::to_string).collect(),
                        witness: s,
                    });
                }
            }
        }
    }

    let position = |o: usize, p: usize| objects[o].points.indices().binary_search(&p).ok();
    let identities = (0..objects.len())
        .map(|o| {
            by_pair[&(o, o)]
                .iter()
                .copied()
                .find(|&f| arrows[f].map.iter().enumerate().all(|(i, &q)| position(o, q) == Some(i)))
                .ok_or_else(|| Error::InvalidAlgebra("object without identity arrow".into()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut composition = Vec::new();
    for (f, af) in arrows.iter().enumerate() {
        for (g, ag) in arrows.iter().enumerate() {
            if af.target != ag.source {
                continue;
            }
            let map: Vec<usize> = af
                .map
                .iter()
                .map(|&q| ag.map[position(ag.source, q).expect("arrow lands in target")])
                .collect();
            let h_idx = by_pair
                .get(&(af.source, ag.target))
                .and_then(|cands| cands.iter().copied().find(|&c| arrows[c].map == map))
                .ok_or_else(|| Error::InvalidAlgebra("composite arrow missing".into()))?;
            composition.push((f, g, h_idx));
        }
    }

    let mut slice = CategorySlice {
        algebra: h.name().to_string(),
        max_vars,
        objects,
        arrows,
        composition,
        identities,
        skeleton: Vec::new(),
        spaces,
    };
    let n = slice.objects.len();
    let mut class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for o in 0..n {
        if class[o] != usize::MAX {
            continue;
        }
        class[o] = classes.len();
        let mut members = vec![o];
        for p in o + 1..n {
            if class[p] == usize::MAX
                && slice.objects[o].dual_size == slice.objects[p].dual_size
                && slice.objects[o]
                    .dual
                    .find_isomorphism(&slice.objects[p].dual, caps)?
                    .is_some()
                && slice.isomorphic_by_arrows(o, p)
            {
                class[p] = class[o];
                members.push(p);
            }
        }
        classes.push(members);
    }
    slice.skeleton = classes;
    Ok(slice)
}

impl CategorySlice {
    pub fn arrows_between(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&f| self.arrows[f].source == a && self.arrows[f].target == b)
            .collect()
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.composition
            .iter()
            .find(|&&(a, b, _)| a == f && b == g)
            .map(|&(_, _, c)| c)
    }

    /// Whether some `f: a -> b`, `g: b -> a` compose to both identities.
    pub fn isomorphic_by_arrows(&self, a: usize, b: usize) -> bool {
        let fs = self.arrows_between(a, b);
        let gs = self.arrows_between(b, a);
        fs.iter().any(|&f| {
            gs.iter().any(|&g| {
                self.compose(f, g) == Some(self.identities[a])
                    && self.compose(g, f) == Some(self.identities[b])
            })
        })
    }

    pub fn is_associative(&self) -> bool {
        let table: HashMap<(usize, usize), usize> =
            self.composition.iter().map(|&(f, g, h)| ((f, g), h)).collect();
        for (&(f, g), &fg) in &table {
            for h in 0..self.arrows.len() {
                if self.arrows[g].target != self.arrows[h].source {
                    continue;
                }
                let left = table.get(&(fg, h));
                let right = table.get(&(g, h)).and_then(|&gh| table.get(&(f, gh)));
                if left.is_none() || left != right {
                    return false;
                }
            }
        }
        true
    }

    /// Graphviz rendering of the skeleton: one node per isomorphism class,
    /// an edge where some arrow joins two distinct classes.
    pub fn to_dot(&self) -> String {
        let mut class_of = vec![0; self.objects.len()];
        for (c, members) in self.skeleton.iter().enumerate() {
            for &o in members {
                class_of[o] = c;
            }
        }
        let mut out = String::from("digraph skeleton {\n  node [shape=box];\n");
        for (c, members) in self.skeleton.iter().enumerate() {
            let o = &self.objects[members[0]];
            out.push_str(&format!(
                "  c{c} [label=\"{} over {}\\n|W/A'| = {}\"];\n",
                o.label.replace('"', "\\\""),
                o.vars.join(","),
                o.dual_size
            ));
        }
        let mut edges: Vec<(usize, usize)> = self
            .arrows
            .iter()
            .map(|a| (class_of[a.source], class_of[a.target]))
            .filter(|(a, b)| a != b)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        for (a, b) in edges {
            out.push_str(&format!("  c{a} -> c{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub failure: Option<String>,
}

/// `|Hom((X,A),(Y,B))| = |Hom(W(Y)/B', W(X)/A')|` for every object pair,
/// through the bijection `[s] -> s-bar`, `s-bar(w B') = s(w) A'`.
pub fn duality_check(slice: &CategorySlice, caps: &Caps) -> Result<DualityReport> {
    let n = slice.objects.len();
    for a in 0..n {
        for b in 0..n {
            let oa = &slice.objects[a];
            let ob = &slice.objects[b];
            let arrows = slice.arrows_between(a, b);
            let homs = ob.dual.enumerate_homs(&oa.dual, caps)?;
            let w_y = slice.spaces[ob.space_index].free();
            let mut bars = Vec::with_capacity(arrows.len());
            let mut failure = None;
            for &f in &arrows {
                let s = &slice.arrows[f].witness;
                let mut bar = vec![usize::MAX; ob.dual_size];
                for e in 0..w_y.size() {
                    let (blk, img) = (ob.congruence.block_of(e), oa.congruence.block_of(s.apply(e)));
                    if bar[blk] != usize::MAX && bar[blk] != img {
                        failure = Some(format!("arrow {f} does not respect the kernel"));
                    }
                    bar[blk] = img;
                }
                if !homs.iter().any(|h| h.map == bar) {
                    failure = Some(format!("arrow {f} does not induce a homomorphism"));
                }
                bars.push(bar);
            }
            bars.sort();
            bars.dedup();
            if failure.is_none() && bars.len() != arrows.len() {
                failure = Some("two arrows induce the same homomorphism".into());
            }
            if failure.is_none() && arrows.len() != homs.len() {
                failure = Some(format!(
                    "{} arrows but {} homomorphisms of dual quotients",
                    arrows.len(),
                    homs.len()
                ));
            }
            if let Some(f) = failure {
                return Ok(DualityReport {
                    holds: false,
                    pairs_checked: a * n + b + 1,
                    failure: Some(format!("objects {a} -> {b}: {f}")),
                });
            }
        }
    }
    Ok(DualityReport {
        holds: true,
        pairs_checked: n * n,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::all_congruences;
    use crate::zoo;

    fn caps() -> Caps {
        Caps::default()
    }

    fn free(h: &FiniteAlgebra, k: usize) -> Arc<FreeAlgebraRep> {
        let vars: Vec<String> = ["x", "y"][..k].iter().map(|s| s.to_string()).collect();
        Arc::new(FreeAlgebraRep::new(h, &vars, &caps()).unwrap())
    }

    #[test]
    fn hom_set_examples() {
        let w2 = free(&zoo::cyclic_group(2), 1);
        assert_eq!(hom_set(&w2, &w2, &caps()).unwrap().len(), 2);
        let w4 = free(&zoo::cyclic_group(4), 1);
        let homs = hom_set(&w4, &w4, &caps()).unwrap();
        assert_eq!(homs.len(), 4);
        assert!(homs.iter().enumerate().all(|(i, s)| hom_index(s) == i));
    }

    #[test]
    fn beta_examples() {
        // elements: x, zero, add(x,x), neg(x)
        let w = free(&zoo::cyclic_group(4), 1);
        let eq = rho(&w, &Partition::discrete(4), &caps()).unwrap();
        assert_eq!(eq.relation.count(), 4);
        let full = rho(&w, &Partition::full(4), &caps()).unwrap();
        assert_eq!(full.relation.count(), 16);
        let t = Partition::from_blocks(4, &[vec![1, 2], vec![0, 3]]).unwrap();
        let r = rho(&w, &t, &caps()).unwrap();
        // endomorphisms indexed by the image of x
        assert!(r.related(0, 3));
        assert!(r.related(1, 2));
        assert!(!r.related(0, 1));
    }

    #[test]
    fn tau_inverts_rho() {
        for h in [zoo::cyclic_group(2), zoo::cyclic_group(4)] {
            for k in 1..=2 {
                let w = free(&h, k);
                for t in all_congruences(w.algebra(), 10_000).unwrap() {
                    let r = rho(&w, &t, &caps()).unwrap();
                    assert_eq!(tau(&r, false).to_partition(), Some(t));
                }
            }
        }
        let w = free(&zoo::cyclic_group(4), 1);
        let mut r = rho(&w, &Partition::full(4), &caps()).unwrap();
        r.relation = Relation::from_partition(&Partition::discrete(4));
        assert!(tau(&r, false).is_reflexive());
    }

    #[test]
    fn cl_on_morphism_examples() {
        let w = free(&zoo::cyclic_group(4), 1);
        let double = FreeMorphism::new(w.clone(), w.clone(), vec![2]).unwrap();
        let pulled = cl_on_morphism(&double, &Partition::discrete(4));
        assert_eq!(pulled.blocks(), vec![vec![0, 3], vec![1, 2]]);
        let t = Partition::from_blocks(4, &[vec![1, 2], vec![0, 3]]).unwrap();
        assert_eq!(cl_on_morphism(&FreeMorphism::identity(w.clone()), &t), t);
    }

    #[test]
    fn alpha_examples() {
        let h = zoo::cyclic_group(2);
        let w = free(&h, 2);
        let fam = InnerFamily::transposition(&[w.clone()]).unwrap();
        let phi = AutomorphismSpec::Inner(fam.clone());
        let space = AffineSpace::over(w.clone(), &h, &caps()).unwrap();
        for node in space.lattice(&caps()).unwrap().nodes {
            let t = &node.congruence;
            assert_eq!(&alpha(&AutomorphismSpec::Identity, &w, t, &caps()).unwrap(), t);
            let s = fam.at(&w).unwrap();
            assert_eq!(alpha(&phi, &w, t, &caps()).unwrap(), t.permuted(s.element_map()));
            let twice = AutomorphismSpec::Composite(vec![phi.clone(), phi.clone()]);
            assert_eq!(&alpha(&twice, &w, t, &caps()).unwrap(), t);
        }
        assert!(verify_inner_equivalence(&fam, &caps()).unwrap().holds);
        let w1 = free(&h, 1);
        let zero = FreeMorphism::new(w1.clone(), w1.clone(), vec![1]).unwrap();
        assert!(InnerFamily::new(vec![zero]).is_err());
    }

    #[test]
    fn category_examples() {
        let z2 = build_category(&zoo::cyclic_group(2), 1, &caps()).unwrap();
        assert_eq!(z2.objects.len(), 2);
        assert_eq!(z2.skeleton.len(), 2);
        assert!(z2.is_associative());
        assert!(duality_check(&z2, &caps()).unwrap().holds);
        let z4 = build_category(&zoo::cyclic_group(4), 1, &caps()).unwrap();
        assert_eq!(z4.objects.len(), 3);
        assert_eq!(z4.skeleton.len(), 3);
        let r = duality_check(&z4, &caps()).unwrap();
        assert!(r.holds, "{:?}", r.failure);
        assert_eq!(r.pairs_checked, 9);
        assert!(z4.to_dot().contains("c2"));
    }

    #[test]
    fn category_two_variables() {
        let s = build_category(&zoo::cyclic_group(2), 2, &caps()).unwrap();
        assert!(s.is_associative());
        for a in 0..s.objects.len() {
            for b in 0..s.objects.len() {
                let same = s.skeleton.iter().any(|c| c.contains(&a) && c.contains(&b));
                assert_eq!(same, s.isomorphic_by_arrows(a, b));
            }
        }
        assert!(duality_check(&s, &caps()).unwrap().holds);
    }
}
