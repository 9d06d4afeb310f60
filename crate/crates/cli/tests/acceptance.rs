//! Acceptance criteria 1-11. Each criterion runs with a pinned time limit
//! and prints one PASS/FAIL line; the binary exits nonzero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use uag_core::checks::{galois_laws, membership_agreement, SuiteReport};
use uag_core::dsl::{parse, print};
use uag_core::equiv::{
    geo_equivalent, mirror_transport_exhaustive, opposite, same_quasi_identities_up_to, twist,
    twist_closure_bijection, FieldAutomorphism,
};
use uag_core::functors::{build_category, duality_check, rho, tau, verify_inner_equivalence, InnerFamily};
use uag_core::linear::LinearSpace;
use uag_core::partition::all_congruences;
use uag_core::term::var_names;
use uag_core::zoo::{self, monoid_signature};
use uag_core::{AffineSpace, Caps, FiniteAlgebra, FreeAlgebraRep, Relation, ScalarField};

const SEED: u64 = 20_240_917;
const CASES: usize = 1000;

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn f4() -> ScalarField {
    ScalarField::galois(2, 2).expect("GF(4)")
}

/// Z2, Z4, Klein, the left-zero band and GF(4) as an algebra over itself.
fn galois_algebras() -> Vec<FiniteAlgebra> {
    vec![
        zoo::cyclic_group(2),
        zoo::cyclic_group(4),
        zoo::klein_group(),
        zoo::left_zero_semigroup(2),
        zoo::field_algebra(&f4()),
    ]
}

/// trivial, Z2, Z3, Z4, Klein, Z2 x Z4.
fn pool() -> Vec<FiniteAlgebra> {
    vec![
        zoo::trivial_group(),
        zoo::cyclic_group(2),
        zoo::cyclic_group(3),
        zoo::cyclic_group(4),
        zoo::klein_group(),
        zoo::product_group(&[2, 4]),
    ]
}

/// Equivalence classes of the pool, by hand: a finite abelian group embeds
/// in a power of another iff its exponent divides the other's, so the
/// classes are the exponents 1, 2, 3, 4.
const POOL_CLASSES: [usize; 6] = [0, 1, 2, 3, 1, 3];

/// Algebraic sets of `Z_n` in one variable, directly from the arithmetic:
/// every equation reduces to `k x = 0`.
fn cyclic_algebraic_sets(n: usize) -> BTreeSet<Vec<usize>> {
    let single: Vec<Vec<usize>> = (0..n).map(|k| (0..n).filter(|x| k * x % n == 0).collect()).collect();
    let mut family: BTreeSet<Vec<usize>> = single.iter().cloned().collect();
    loop {
        let mut grown = family.clone();
        for a in &family {
            for b in &single {
                grown.insert(a.iter().copied().filter(|x| b.contains(x)).collect());
            }
        }
        if grown == family {
            return family;
        }
        family = grown;
    }
}

fn suite_line(r: &SuiteReport) -> Result<(), String> {
    ensure(r.passed(), || {
        format!(
            "{} on {} with {} vars: {} failures, first: {:?}",
            r.suite, r.algebra, r.vars, r.failures, r.first_failure
        )
    })
}

fn c1_galois_laws() -> Outcome {
    let caps = Caps::default();
    let (mut random, mut exhaustive, mut linear) = (0, 0, 0);
    for h in galois_algebras() {
        for k in 1..=2 {
            let r = galois_laws(&h, k, CASES, SEED, &caps).map_err(err)?;
            suite_line(&r)?;
            random += r.random_cases;
            exhaustive += r.exhaustive_cases;
            linear += usize::from(r.backend == "linear");
        }
    }
    Ok(format!(
        "{random} random and {exhaustive} single-equation cases, 0 failures ({linear} run on the linear backend)"
    ))
}

fn c2_membership() -> Outcome {
    let caps = Caps::default();
    let mut total = 0;
    for h in galois_algebras() {
        let mut per_algebra = 0;
        for k in 1..=2 {
            let r = membership_agreement(&h, k, CASES, SEED, &caps).map_err(err)?;
            suite_line(&r)?;
            per_algebra += r.random_cases;
        }
        ensure(per_algebra >= CASES, || format!("only {per_algebra} cases on {}", h.name()))?;
        total += per_algebra;
    }
    Ok(format!("{total} cases, 0 mismatches"))
}

fn c3_tau_rho() -> Outcome {
    let caps = Caps::default();
    let mut checked = 0;
    for h in [zoo::cyclic_group(2), zoo::cyclic_group(4)] {
        for k in 1..=2 {
            let w = Arc::new(FreeAlgebraRep::new(&h, &var_names(k), &caps).map_err(err)?);
            for t in all_congruences(w.algebra(), caps.free).map_err(err)? {
                let back = tau(&rho(&w, &t, &caps).map_err(err)?, false);
                ensure(back == Relation::from_partition(&t), || {
                    format!("tau rho T != T on W({}) over {}", k, h.name())
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} congruences, 0 failures"))
}

fn c4_lattice_duality() -> Outcome {
    let caps = Caps::default();
    let mut lattices = 0;
    for h in galois_algebras() {
        for k in 1..=2 {
            let vars = var_names(k);
            match AffineSpace::new(&h, &vars, &caps) {
                Ok(space) => {
                    let lat = space.lattice(&caps).map_err(err)?;
                    ensure(space.lattice_duality_holds(&lat), || {
                        format!("duality fails for {} with {k} vars", h.name())
                    })?;
                    if k == 1 && (h.name() == "Z4" || h.name() == "Z2") {
                        let n = h.size();
                        let got: BTreeSet<Vec<usize>> = lat.nodes.iter().map(|n| n.points.indices()).collect();
                        ensure(got == cyclic_algebraic_sets(n), || format!("{} lattice is {got:?}", h.name()))?;
                        ensure(lat.nodes.len() == if n == 4 { 3 } else { 2 }, || {
                            format!("{} lattice has {} nodes", h.name(), lat.nodes.len())
                        })?;
                        ensure(lat.longest_chain.len() == lat.nodes.len(), || {
                            format!("{} lattice is not a chain", h.name())
                        })?;
                    }
                }
                Err(e) if e.is_cap_exceeded() => {
                    let space = LinearSpace::new(&h, &vars, &caps).map_err(err)?;
                    let sets = space.algebraic_sets(&caps).map_err(err)?;
                    ensure(space.lattice_duality_holds(&sets), || {
                        format!("duality fails for {} with {k} vars (linear)", h.name())
                    })?;
                }
                Err(e) => return Err(err(e)),
            }
            lattices += 1;
        }
    }
    Ok(format!(
        "{lattices} lattices anti-isomorphic; Z4 in one variable is the chain {{0}} < {{0,2}} < full, Z2 has 2 nodes"
    ))
}

fn c5_equivalence() -> Outcome {
    let caps = Caps::default();
    let z2 = zoo::cyclic_group(2);
    let v = geo_equivalent(&z2, &zoo::product_group(&[2, 2]), true, &caps).map_err(err)?;
    ensure(v.equivalent && v.oracle_equivalent == Some(true), || "Z2 and Z2xZ2 not equivalent".into())?;
    let z4 = zoo::cyclic_group(4);
    let v = geo_equivalent(&z2, &z4, true, &caps).map_err(err)?;
    ensure(!v.equivalent, || "Z2 and Z4 reported equivalent".into())?;
    let w = v.oracle_witness.ok_or("no witness for Z2 vs Z4")?;
    ensure(w.replay(&z2, &z4, &caps).map_err(err)?, || format!("witness {} does not replay", w.quasi_identity()))?;
    let pool = pool();
    let mut pairs = 0;
    for i in 0..pool.len() {
        for j in i..pool.len() {
            let v = geo_equivalent(&pool[i], &pool[j], true, &caps).map_err(err)?;
            let (a, b) = (pool[i].name(), pool[j].name());
            ensure(v.oracle_equivalent == Some(v.equivalent), || format!("oracle disagrees on {a}, {b}"))?;
            ensure(v.equivalent == (POOL_CLASSES[i] == POOL_CLASSES[j]), || {
                format!("{a}, {b}: verdict {} against the expected classes", v.equivalent)
            })?;
            if let Some(w) = &v.oracle_witness {
                ensure(w.replay(&pool[i], &pool[j], &caps).map_err(err)?, || format!("witness for {a}, {b} fails"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("Z2 ~ Z2xZ2, Z2 !~ Z4 with witness `{}`; oracle agrees on {pairs} pool pairs", w.quasi_identity()))
}

fn c6_quasi_identities() -> Outcome {
    let caps = Caps::default();
    let pool = pool();
    let mut pairs = 0;
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            let geo = geo_equivalent(&pool[i], &pool[j], false, &caps).map_err(err)?.equivalent;
            let q = same_quasi_identities_up_to(&pool[i], &pool[j], 3, 2, 2, &caps).map_err(err)?;
            ensure(geo == q.agree, || {
                format!("{} vs {}: geometric {geo}, quasi-identities {}", pool[i].name(), pool[j].name(), q.agree)
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, 0 disagreements"))
}

fn c7_inner() -> Outcome {
    let caps = Caps::default();
    let z2 = zoo::cyclic_group(2);
    let objects = (1..=2)
        .map(|k| FreeAlgebraRep::new(&z2, &var_names(k), &caps).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let family = InnerFamily::transposition(&objects).map_err(err)?;
    let r = verify_inner_equivalence(&family, &caps).map_err(err)?;
    ensure(r.holds, || format!("{:?}", r.failure))?;
    Ok(format!("{} objects, {} closed congruences, 0 failures", r.objects, r.congruences_checked))
}

fn c8_twist() -> Outcome {
    let caps = Caps::default();
    let h = zoo::field_algebra(&f4());
    let sigma = FieldAutomorphism::frobenius_power(&f4(), 1).map_err(err)?;
    let r = twist_closure_bijection(&h, &sigma, &var_names(1), &caps).map_err(err)?;
    ensure(r.holds, || format!("{:?}", r.failure))?;
    let back = twist(&twist(&h, &sigma).map_err(err)?, &sigma).map_err(err)?;
    ensure(back == h, || "twist twice is not the identity".into())?;
    Ok(format!("{} nodes over |W| = {}, twist twice = id", r.nodes, r.free_size))
}

/// Multiplicative monoid of Z3.
fn mod3_monoid() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("M3", monoid_signature(), 3, |op, a| if op == 0 { a[0] * a[1] % 3 } else { 1 })
        .expect("monoid")
}

fn c9_mirror() -> Outcome {
    let caps = Caps::default();
    let mut systems = 0;
    let cases = [
        (zoo::left_zero_semigroup(2), 2),
        (zoo::transformation_monoid(), 2),
        (zoo::upper_triangular_monoid(), 2),
        (mod3_monoid(), 2),
    ];
    for (h, max_vars) in cases {
        for k in 1..=max_vars {
            let r = mirror_transport_exhaustive(&h, &var_names(k), &caps).map_err(err)?;
            ensure(r.holds, || format!("{} with {k} vars: {:?}", h.name(), r.failure))?;
            systems += r.systems_checked;
        }
    }
    let m3 = mod3_monoid();
    ensure(opposite(&m3).map_err(err)? == m3, || "commutative monoid differs from its opposite".into())?;
    Ok(format!("{systems} systems transported, 0 failures"))
}

fn c10_category() -> Outcome {
    let caps = Caps::default();
    let z4 = zoo::cyclic_group(4);
    let slice = build_category(&z4, 1, &caps).map_err(err)?;
    let expected = cyclic_algebraic_sets(4);
    // isomorphic objects have equally many points, and the three differ
    let sizes: BTreeSet<usize> = expected.iter().map(Vec::len).collect();
    ensure(slice.objects.len() == expected.len(), || format!("{} objects", slice.objects.len()))?;
    ensure(slice.skeleton.len() == sizes.len(), || format!("{} skeleton classes", slice.skeleton.len()))?;
    let mut pairs = 0;
    for (h, max_vars) in [(zoo::cyclic_group(2), 2), (zoo::cyclic_group(4), 1)] {
        let slice = build_category(&h, max_vars, &caps).map_err(err)?;
        let d = duality_check(&slice, &caps).map_err(err)?;
        ensure(d.holds, || format!("{}: {:?}", h.name(), d.failure))?;
        pairs += d.pairs_checked;
    }
    Ok(format!("Z4: 3 objects, 3 classes; duality on {pairs} object pairs"))
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("samples")
}

fn run_uag(args: &[&str]) -> Result<i32, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_uag")).args(args).output().map_err(err)?;
    out.status.code().ok_or_else(|| "terminated by a signal".to_string())
}

fn c11_cli() -> Outcome {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus");
    let mut docs = 0;
    for entry in fs::read_dir(&corpus).map_err(err)? {
        let path = entry.map_err(err)?.path();
        let text = fs::read_to_string(&path).map_err(err)?;
        let doc = parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let again = parse(&print(&doc)).map_err(|e| format!("{} reprinted: {e}", path.display()))?;
        ensure(again == doc, || format!("{} does not round-trip", path.display()))?;
        docs += 1;
    }
    ensure(docs >= 30, || format!("corpus has {docs} documents"))?;

    let dir = tempfile::tempdir().map_err(err)?;
    let (z2, z4) = (samples().join("z2.alg"), samples().join("z4.alg"));
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let code = run_uag(&[
            "equiv",
            "--algebra",
            z2.to_str().unwrap(),
            "--algebra2",
            z4.to_str().unwrap(),
            "--json",
            out.to_str().unwrap(),
        ])?;
        ensure(code == 1, || format!("equiv exited {code}"))?;
        reports.push(out);
    }
    let text = fs::read_to_string(&reports[0]).map_err(err)?;
    ensure(text.contains("\"witnesses\": [\n    {"), || "report carries no witness".into())?;
    let code = run_uag(&["verify-witness", reports[0].to_str().unwrap()])?;
    ensure(code == 0, || format!("verify-witness exited {code}"))?;
    let same = fs::read(&reports[0]).map_err(err)? == fs::read(&reports[1]).map_err(err)?;
    ensure(same, || "two runs produced different JSON".into())?;
    Ok(format!("{docs} documents round-trip; equiv exits 1, witness re-validates, JSON byte-identical"))
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "Galois laws", limit: Duration::from_secs(10), run: c1_galois_laws },
        Criterion { id: 2, title: "membership agrees with closure lookup", limit: Duration::from_secs(10), run: c2_membership },
        Criterion { id: 3, title: "tau rho (T) = T", limit: Duration::from_secs(60), run: c3_tau_rho },
        Criterion { id: 4, title: "lattice duality", limit: Duration::from_secs(5), run: c4_lattice_duality },
        Criterion { id: 5, title: "geometric equivalence verdicts", limit: Duration::from_secs(120), run: c5_equivalence },
        Criterion { id: 6, title: "equivalence = same quasi-identities", limit: Duration::from_secs(120), run: c6_quasi_identities },
        Criterion { id: 7, title: "inner automorphism acts as s_W", limit: Duration::from_secs(60), run: c7_inner },
        Criterion { id: 8, title: "scalar twist bijection", limit: Duration::from_secs(30), run: c8_twist },
        Criterion { id: 9, title: "mirror closure transport", limit: Duration::from_secs(60), run: c9_mirror },
        Criterion { id: 10, title: "category slice and duality", limit: Duration::from_secs(60), run: c10_category },
        Criterion { id: 11, title: "command line", limit: Duration::from_secs(10), run: c11_cli },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time limit; {d}")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {verdict} {} ({:.2}s / {}s): {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
