use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("samples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn uag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uag")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--json", &p]);
    let out = uag(&full);
    let text = fs::read_to_string(&path).unwrap_or_else(|_| panic!("no report; stderr: {}", stderr(&out)));
    (code(&out), serde_json::from_str(&text).unwrap())
}

#[test]
fn closure_of_empty_system_is_diagonal() {
    let out = uag(&["closure", "--algebra", &sample("z4.alg"), "--system", &sample("empty.sys"), "--vars", "x"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("4 blocks on 4 free elements (diagonal)"));
}

#[test]
fn lattice_of_z4_is_a_three_chain() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("l.dot");
    let out = uag(&["lattice", "--algebra", &sample("z4.alg"), "--vars", "x", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dot = fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 2);
    assert!(dot.contains("n0 -> n1;") && dot.contains("n1 -> n2;"));
    assert!(dot.contains("{0,2}"));
}

#[test]
fn report_envelope() {
    let (c, r) = json_report(&["solve", "--algebra", &sample("z4.alg"), "--system", &sample("double.sys"), "--vars", "x"]);
    assert_eq!(c, 0);
    assert_eq!(r["schema"], "uag/1");
    assert_eq!(r["command"], "solve");
    for key in ["inputs", "result", "witnesses"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    // inputs carry the canonical algebra text, not the path
    assert!(r["inputs"]["algebra"].as_str().unwrap().starts_with("algebra Z4 {"));
}

#[test]
fn equivalence_verdicts_and_witness_replay() {
    let out = uag(&["equiv", "--algebra", &sample("z2.alg"), "--algebra2", &sample("klein.alg")]);
    assert_eq!(code(&out), 0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let p = path.to_str().unwrap();
    let out = uag(&["equiv", "--algebra", &sample("z2.alg"), "--algebra2", &sample("z4.alg"), "--json", p]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(!report["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(code(&uag(&["verify-witness", p])), 0);

    // a forged witness is rejected
    let forged = fs::read_to_string(&path).unwrap().replace("\"in_first\": true", "\"in_first\": false");
    let forged_path = dir.path().join("forged.json");
    fs::write(&forged_path, forged).unwrap();
    assert_eq!(code(&uag(&["verify-witness", forged_path.to_str().unwrap()])), 1);

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"schema\": \"other\"}").unwrap();
    assert_eq!(code(&uag(&["verify-witness", broken.to_str().unwrap()])), 2);
}

#[test]
fn quasi_identities() {
    let out = uag(&["quasi-check", "--algebra", &sample("z4.alg"), "--system", &sample("cancel.q")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("counterexample: x=2"));
    let (c, r) = json_report(&["member", "--algebra", &sample("z4.alg"), "--system", &sample("cancel.q")]);
    assert_eq!(c, 1);
    assert_eq!(r["witnesses"][0]["kind"], "counterexample");
    let out = uag(&["quasi-compare", "--algebra", &sample("z2.alg"), "--algebra2", &sample("klein.alg")]);
    assert_eq!(code(&out), 0);
    let out = uag(&["quasi-compare", "--algebra", &sample("z2.alg"), "--algebra2", &sample("z4.alg")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn seeded_suites() {
    let out = uag(&["member", "--algebra", &sample("klein.alg"), "--seed", "11", "--cases", "200"]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    let out = uag(&["member", "--algebra", &sample("f4.alg"), "--seed", "3", "--cases", "100"]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
}

#[test]
fn structural_commands() {
    let ok = |args: &[&str]| {
        let out = uag(args);
        assert_eq!(code(&out), 0, "{args:?}: {}{}", stdout(&out), stderr(&out));
        stdout(&out)
    };
    ok(&["opposite", "--algebra", &sample("t2.alg"), "--vars", "x,y"]);
    ok(&["twist", "--algebra", &sample("f4.alg"), "--sigma", "frob^1"]);
    ok(&["alpha", "--algebra", &sample("z2.alg")]);
    ok(&["alpha", "--algebra", &sample("f4.alg"), "--sigma", "frob^1", "--vars", "x"]);
    ok(&["tau-rho", "--algebra", &sample("z4.alg")]);
    ok(&["acc", "--algebra", &sample("z4.alg"), "--vars", "x,y"]);
    ok(&["almost-equiv", "--algebra", &sample("z2.alg"), "--algebra2", &sample("klein.alg")]);
    let text = ok(&["duality", "--algebra", &sample("z4.alg")]);
    assert!(!text.is_empty());
    let (_, r) = json_report(&["category", "--algebra", &sample("z4.alg"), "--max-vars", "1"]);
    assert_eq!(r["result"]["objects"].as_array().unwrap().len(), 3);
    assert_eq!(r["result"]["skeleton"].as_array().unwrap().len(), 3);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    fs::write(&bad, "algebra A { carrier 2 op f/2 table [[0,2],[1,0]] }").unwrap();
    let out = uag(&["closure", "--algebra", bad.to_str().unwrap(), "--vars", "x"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("entry 2 out of range"), "{}", stderr(&out));

    assert_eq!(code(&uag(&["closure", "--vars", "x"])), 2);
    assert_eq!(code(&uag(&["no-such-command"])), 2);

    let out = uag(&["lattice", "--algebra", &sample("z4.alg"), "--vars", "x,y", "--cap-points", "8"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn identical_runs_give_identical_json() {
    let args = ["category", "--algebra", &sample("z2.alg"), "--max-vars", "2"];
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        full.extend(["--json", &p]);
        assert_eq!(code(&uag(&full)), 0);
        texts.push(fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}
