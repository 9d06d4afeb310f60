//! Seeded randomized suites for the Galois laws and for agreement between
//! direct quasi-identity evaluation and closure lookup.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::Result;
use crate::galois::{membership, AffineSpace, EquationSystem, PointSet};
use crate::linear::LinearSpace;
use crate::partition::Partition;
use crate::term::{var_names, Term};
use crate::Caps;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// `table` (listed free algebra) or `linear` (free algebra as a subspace).
    pub backend: String,
    pub algebra: String,
    pub vars: usize,
    pub random_cases: usize,
    pub exhaustive_cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: &str, h: &FiniteAlgebra, vars: usize) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            backend: "table".into(),
            algebra: h.name().into(),
            vars,
            random_cases: 0,
            exhaustive_cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_pairs(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<(usize, usize)> {
    let k = rng.gen_range(0..=max);
    (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    let density: f64 = rng.gen();
    PointSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(density)))
}

fn holds_on(space: &AffineSpace, pairs: &[(usize, usize)], a: &PointSet) -> bool {
    let k = space.kernel(a);
    pairs.iter().all(|&(e, f)| k.same(e, f))
}

/// Adjunction `A ⊆ T' <=> T ⊆ A'`, antitonicity of both maps, extensivity
/// and idempotence of both closures, on `cases` random `(T, A)` and on
/// every single-equation system.
///
/// Uses the listed free algebra when it fits the caps, and otherwise the
/// linear representation when `H` admits one. In the linear case a single
/// equation `u = v` has the same solution set and closure as `u - v = 0`,
/// so single equations are enumerated through the elements `w = u - v`, or
/// through their zero sets when `W(X)` is every function `H^X -> H`.
pub fn galois_laws(h: &FiniteAlgebra, vars: usize, cases: usize, seed: u64, caps: &Caps) -> Result<SuiteReport> {
    match AffineSpace::new(h, &var_names(vars), caps) {
        Ok(space) => Ok(galois_laws_table(&space, h, vars, cases, seed)),
        Err(e) if e.is_cap_exceeded() => match LinearSpace::new(h, &var_names(vars), caps) {
            Ok(space) => galois_laws_linear(&space, vars, cases, seed, caps),
            Err(_) => Err(e),
        },
        Err(e) => Err(e),
    }
}

fn galois_laws_table(space: &AffineSpace, h: &FiniteAlgebra, vars: usize, cases: usize, seed: u64) -> SuiteReport {
    let (n, np) = (space.num_elements(), space.num_points());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("galois-laws", h, vars);
    let show = |pairs: &[(usize, usize)]| {
        let f = space.free();
        pairs
            .iter()
            .map(|&(e, g)| format!("{} = {}", f.term(e), f.term(g)))
            .collect::<Vec<_>>()
            .join("; ")
    };

    for _ in 0..cases {
        report.random_cases += 1;
        let t = random_pairs(&mut rng, n, 3);
        let a = random_points(&mut rng, np);
        let sol = space.solve_pairs(&t);
        if a.is_subset(&sol) != holds_on(&space, &t, &a) {
            report.fail(format!("adjunction fails for T = {{{}}}, A = {:?}", show(&t), a.indices()));
        }

        let mut bigger = t.clone();
        bigger.extend(random_pairs(&mut rng, n, 2));
        if !space.solve_pairs(&bigger).is_subset(&sol) {
            report.fail(format!("T -> T' not antitone at T = {{{}}}", show(&t)));
        }
        let b = a.union(&random_points(&mut rng, np));
        if !space.kernel(&b).refines(&space.kernel(&a)) {
            report.fail(format!("A -> A' not antitone at A = {:?}", a.indices()));
        }

        let tc = space.closure_of_pairs(&t);
        if !t.iter().all(|&(e, f)| tc.partition.same(e, f)) {
            report.fail(format!("T not contained in T'' for T = {{{}}}", show(&t)));
        }
        if space.closure_of_partition(&tc.partition).partition != tc.partition {
            report.fail(format!("T'' not idempotent at T = {{{}}}", show(&t)));
        }
        let ac = space.closure_of_points(&a);
        if !a.is_subset(&ac) || space.closure_of_points(&ac) != ac {
            report.fail(format!("A'' not extensive or idempotent at A = {:?}", a.indices()));
        }
    }

    // T'' of a single pair is the kernel of its solution set; the laws that
    // only involve T'' and T' are checked once per distinct solution set
    let mut per_set: HashMap<PointSet, (Partition, bool)> = HashMap::new();
    for e in 0..n {
        for f in e + 1..n {
            report.exhaustive_cases += 1;
            let t = [(e, f)];
            let sol = space.pair_solutions(e, f);
            let (tc, closed) = per_set.entry(sol.clone()).or_insert_with(|| {
                let tc = space.closure_of_pairs(&t).partition;
                let closed = space.closure_of_partition(&tc).partition == tc && space.closure_of_points(&sol) == sol;
                (tc, closed)
            });
            if !holds_on(&space, &t, &sol) || !tc.same(e, f) || !*closed {
                report.fail(format!("single equation {} fails a law", show(&t)));
            }
        }
    }
    report
}

/// The same laws with `A'` stored as the subspace `I_A`.
pub fn galois_laws_linear(space: &LinearSpace, vars: usize, cases: usize, seed: u64, caps: &Caps) -> Result<SuiteReport> {
    let h = space.algebra();
    let names = space.vars().to_vec();
    let np = space.num_points();
    let f = space.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("galois-laws", h, vars);
    report.backend = "linear".into();
    let random_system = |rng: &mut ChaCha8Rng, max: usize| -> Result<Vec<(Term, Term)>> {
        let k = rng.gen_range(0..=max);
        Ok((0..k)
            .map(|_| (random_term(rng, h, &names, 3), random_term(rng, h, &names, 3)))
            .collect())
    };
    let show = |t: &[(Term, Term)]| t.iter().map(|(l, r)| format!("{l} = {r}")).collect::<Vec<_>>().join("; ");

    for _ in 0..cases {
        report.random_cases += 1;
        let t = random_system(&mut rng, 3)?;
        let tv = t
            .iter()
            .map(|(l, r)| Ok((space.eval(l)?, space.eval(r)?)))
            .collect::<Result<Vec<_>>>()?;
        let a = random_points(&mut rng, np);
        let sol = space.solve_pairs(&tv);
        let ia = space.ideal(&a);
        let t_in_a = tv.iter().all(|(u, v)| space.identifies(&ia, u, v));
        if a.is_subset(&sol) != t_in_a {
            report.fail(format!("adjunction fails for T = {{{}}}, A = {:?}", show(&t), a.indices()));
        }

        let extra = random_system(&mut rng, 2)?;
        let mut bigger = tv.clone();
        for (l, r) in &extra {
            bigger.push((space.eval(l)?, space.eval(r)?));
        }
        if !space.solve_pairs(&bigger).is_subset(&sol) {
            report.fail(format!("T -> T' not antitone at T = {{{}}}", show(&t)));
        }
        let b = a.union(&random_points(&mut rng, np));
        if !space.ideal(&b).is_subspace_of(f, &ia) {
            report.fail(format!("A -> A' not antitone at A = {:?}", a.indices()));
        }

        let closure = space.ideal(&sol);
        if !tv.iter().all(|(u, v)| space.identifies(&closure, u, v)) {
            report.fail(format!("T not contained in T'' for T = {{{}}}", show(&t)));
        }
        if space.ideal(&space.zeros(&closure)) != closure {
            report.fail(format!("T'' not idempotent at T = {{{}}}", show(&t)));
        }
        let ac = space.zeros(&ia);
        if !a.is_subset(&ac) || space.closure_of_points(&ac) != ac {
            report.fail(format!("A'' not extensive or idempotent at A = {:?}", a.indices()));
        }
    }

    let zero = vec![f.zero(); np * space.structure().dim()];
    let single = |w: &[usize], report: &mut SuiteReport| {
        report.exhaustive_cases += 1;
        let sol = space.pair_solutions(w, &zero);
        let closure = space.ideal(&sol);
        // with zeros(T'') = T' the second closure is T'' again
        if !space.identifies(&closure, w, &zero) || space.zeros(&closure) != sol {
            report.fail(format!("single equation w = 0 with w = {w:?} fails a law"));
        }
    };
    match space.elements(caps.free) {
        Ok(all) => all.iter().for_each(|w| single(w, &mut report)),
        Err(e) if space.is_full() => {
            // every subset of points is the zero set of some function
            let subsets = crate::check_cap("zero sets", crate::pow_u128(2, np), caps.pairs).map_err(|_| e)?;
            let d = space.structure().dim();
            for mask in 0..subsets {
                let mut w = zero.clone();
                for p in (0..np).filter(|p| mask >> p & 1 == 0) {
                    w[p * d] = f.one();
                }
                single(&w, &mut report);
            }
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// A random term of depth at most `depth` over the signature of `h`.
pub fn random_term(rng: &mut ChaCha8Rng, h: &FiniteAlgebra, vars: &[String], depth: usize) -> Term {
    let ops = h.signature().ops();
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        let constants: Vec<_> = ops.iter().filter(|o| o.arity == 0).collect();
        if !constants.is_empty() && rng.gen_bool(0.25) {
            return Term::constant(constants.choose(rng).unwrap().name.clone());
        }
        return Term::var(vars.choose(rng).unwrap().clone());
    }
    let op = ops.choose(rng).unwrap();
    let args = (0..op.arity).map(|_| random_term(rng, h, vars, depth - 1)).collect();
    Term::app(op.name.clone(), args)
}

/// Agreement of `membership` (direct evaluation of `T -> w0 = w0'` in `H`)
/// with the test `(w0, w0') ∈ T''` on random systems and terms.
pub fn membership_agreement(
    h: &FiniteAlgebra,
    vars: usize,
    cases: usize,
    seed: u64,
    caps: &Caps,
) -> Result<SuiteReport> {
    let names = var_names(vars);
    let space = match AffineSpace::new(h, &names, caps) {
        Ok(space) => space,
        Err(e) if e.is_cap_exceeded() => {
            return match LinearSpace::new(h, &names, caps) {
                Ok(space) => membership_agreement_linear(&space, cases, seed, caps),
                Err(_) => Err(e),
            }
        }
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("membership-agreement", h, vars);
    for _ in 0..cases {
        report.random_cases += 1;
        let k = rng.gen_range(0..=2);
        let pairs = (0..k)
            .map(|_| (random_term(&mut rng, h, &names, 3), random_term(&mut rng, h, &names, 3)))
            .collect();
        let system = EquationSystem::new(names.clone(), pairs)?;
        let w0 = random_term(&mut rng, h, &names, 3);
        let w0p = random_term(&mut rng, h, &names, 3);
        let direct = space.membership(&w0, &w0p, &system, caps)?.holds;
        let closure = space.closure_of_system(&system)?;
        let lookup = closure
            .partition
            .same(space.element_of(&w0)?, space.element_of(&w0p)?);
        if direct != lookup {
            report.fail(format!("{system} => {w0} = {w0p}: direct {direct}, closure {lookup}"));
        }
    }
    Ok(report)
}

/// Closure lookup through `w0 - w0' ∈ I_{T'}`.
pub fn membership_agreement_linear(space: &LinearSpace, cases: usize, seed: u64, caps: &Caps) -> Result<SuiteReport> {
    let h = space.algebra();
    let names = space.vars().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("membership-agreement", h, names.len());
    report.backend = "linear".into();
    for _ in 0..cases {
        report.random_cases += 1;
        let k = rng.gen_range(0..=2);
        let pairs: Vec<(Term, Term)> = (0..k)
            .map(|_| (random_term(&mut rng, h, &names, 3), random_term(&mut rng, h, &names, 3)))
            .collect();
        let system = EquationSystem::new(names.clone(), pairs)?;
        let w0 = random_term(&mut rng, h, &names, 3);
        let w0p = random_term(&mut rng, h, &names, 3);
        let direct = membership(h, &names, &system, &w0, &w0p, caps)?.holds;
        let tv = system
            .pairs
            .iter()
            .map(|(l, r)| Ok((space.eval(l)?, space.eval(r)?)))
            .collect::<Result<Vec<_>>>()?;
        let closure = space.ideal(&space.solve_pairs(&tv));
        let lookup = space.identifies(&closure, &space.eval(&w0)?, &space.eval(&w0p)?);
        if direct != lookup {
            report.fail(format!("{system} => {w0} = {w0p}: direct {direct}, closure {lookup}"));
        }
    }
    Ok(report)
}
