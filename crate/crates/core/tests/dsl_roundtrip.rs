mod common;

use std::fs;
use std::path::Path;

use proptest::prelude::*;
use uag_core::dsl::{parse, print, print_algebra, print_quasi, print_system};
use uag_core::equiv::QuasiIdentity;
use uag_core::term::var_names;
use uag_core::{zoo, EquationSystem, ScalarField, Term};

use common::*;

fn corpus() -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn corpus_round_trips() {
    let docs = corpus();
    assert!(docs.len() >= 30);
    for (name, text) in docs {
        let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print(&doc);
        let again = parse(&printed).unwrap_or_else(|e| panic!("{name} reprinted: {e}\n{printed}"));
        assert_eq!(again, doc, "{name}");
        assert_eq!(print(&again), printed, "{name}");
        for a in doc.algebra_names() {
            doc.algebra(Some(a)).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn built_algebras_survive_printing() {
    let f4 = ScalarField::galois(2, 2).unwrap();
    for h in [
        zoo::cyclic_group(5),
        zoo::klein_group(),
        zoo::product_group(&[2, 3]),
        zoo::transformation_monoid(),
        zoo::upper_triangular_monoid(),
        zoo::left_zero_semigroup(3),
        zoo::field_algebra(&f4),
        zoo::linear_algebra(&f4),
    ] {
        let doc = parse(&print_algebra(&h)).unwrap();
        assert_eq!(doc.algebra(None).unwrap(), h, "{}", h.name());
    }
}

#[test]
fn validation_and_syntax_errors() {
    let e = parse("algebra A { carrier 2 op f/2 table [[0,2],[1,0]] }").unwrap_err();
    assert!(e.to_string().contains("entry 2 out of range"), "{e}");
    let e = parse("algebra A { carrier 2 op f/2 table [[0,1],[1,0]] op f/1 table [0,1] }").unwrap_err();
    assert!(e.to_string().contains("duplicate"), "{e}");
    let e = parse("algebra A { carrier 2 op f/2 table [0,1] }").unwrap_err();
    assert!(e.to_string().starts_with("1:"), "{e}");
    let e = parse("system S over x { f(x = x }").unwrap_err();
    assert!(e.to_string().starts_with("1:"), "{e}");
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y")), Just(Term::constant("c"))];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("f", vec![a, b])),
            inner.prop_map(|a| Term::app("g", vec![a])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_algebras_round_trip(h in small_algebra()) {
        let text = print_algebra(&h);
        let doc = parse(&text).unwrap();
        prop_assert_eq!(doc.algebra(None).unwrap(), h);
        prop_assert_eq!(print(&doc), text);
    }

    #[test]
    fn random_systems_round_trip(
        pairs in prop::collection::vec((term_strategy(), term_strategy()), 0..4),
        conclusion in (term_strategy(), term_strategy()),
    ) {
        let s = EquationSystem::new(var_names(2), pairs.clone()).unwrap();
        let doc = parse(&print_system("S", &s)).unwrap();
        prop_assert_eq!(doc.system(None).unwrap(), s);
        let q = QuasiIdentity::new(var_names(2), pairs, conclusion).unwrap();
        let doc = parse(&print_quasi("Q", &q)).unwrap();
        prop_assert_eq!(doc.quasi(None).unwrap(), q);
    }
}
