//! Independent re-checks of the witnesses in a JSON report.

use std::fmt::Write;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use uag_core::dsl;
use uag_core::equiv::QuasiIdentity;
use uag_core::{Caps, FiniteAlgebra, Point};

use crate::report::{CliError, CliResult, Outcome, SCHEMA};

fn malformed(m: impl Into<String>) -> CliError {
    CliError::Usage(format!("malformed report: {}", m.into()))
}

fn algebra_input(report: &Value, key: &str) -> CliResult<Option<FiniteAlgebra>> {
    match report["inputs"].get(key) {
        None => Ok(None),
        Some(Value::String(text)) => {
            let doc = dsl::parse(text).map_err(|e| malformed(format!("inputs.{key}: {e}")))?;
            Ok(Some(doc.algebra(None).map_err(|e| malformed(format!("inputs.{key}: {e}")))?))
        }
        Some(_) => Err(malformed(format!("inputs.{key} is not a string"))),
    }
}

fn quasi_of(w: &Value) -> CliResult<QuasiIdentity> {
    let text = w["quasi"].as_str().ok_or_else(|| malformed("witness without `quasi`"))?;
    let doc = dsl::parse(text).map_err(|e| malformed(format!("witness quasi: {e}")))?;
    Ok(doc.quasi(None)?)
}

/// Whether `q` holds at every point of `h`, by term evaluation.
fn holds_everywhere(q: &QuasiIdentity, h: &FiniteAlgebra) -> CliResult<bool> {
    let n = q.vars.len() as u32;
    let total = h
        .size()
        .checked_pow(n)
        .ok_or_else(|| malformed("too many points to re-check"))?;
    for i in 0..total {
        if !holds_at(q, h, &Point::from_index(&q.vars, h.size(), i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn holds_at(q: &QuasiIdentity, h: &FiniteAlgebra, p: &Point) -> CliResult<bool> {
    for (l, r) in &q.premises {
        if h.eval(l, p)? != h.eval(r, p)? {
            return Ok(true);
        }
    }
    let (l, r) = &q.conclusion;
    Ok(h.eval(l, p)? == h.eval(r, p)?)
}

fn need<'a>(h: &'a Option<FiniteAlgebra>, key: &str) -> CliResult<&'a FiniteAlgebra> {
    h.as_ref().ok_or_else(|| malformed(format!("witness needs inputs.{key}")))
}

/// `Ok(Some(reason))` when the witness does not re-validate.
fn check(w: &Value, h1: &Option<FiniteAlgebra>, h2: &Option<FiniteAlgebra>, caps: &Caps) -> CliResult<Option<String>> {
    match w["kind"].as_str() {
        Some("oracle") => {
            let q = quasi_of(w)?;
            let in_first = w["in_first"].as_bool().ok_or_else(|| malformed("oracle witness without `in_first`"))?;
            let a = holds_everywhere(&q, need(h1, "algebra")?)?;
            let b = holds_everywhere(&q, need(h2, "algebra2")?)?;
            Ok((a != in_first || b == in_first)
                .then(|| format!("{q}: holds in first {a}, in second {b}")))
        }
        Some("counterexample") => {
            let q = quasi_of(w)?;
            let h = need(h1, "algebra")?;
            let values: Vec<usize> = serde_json::from_value(w["point"].clone())
                .map_err(|_| malformed("counterexample without a `point` list"))?;
            if values.iter().any(|&v| v >= h.size()) {
                return Ok(Some("point outside the carrier".into()));
            }
            let p = Point::new(q.vars.clone(), values)?;
            Ok(holds_at(&q, h, &p)?.then(|| format!("{q} holds at {p}")))
        }
        Some("inseparable") => {
            let (from, to) = match w["source"].as_str() {
                Some("algebra") => (need(h1, "algebra")?, need(h2, "algebra2")?),
                Some("algebra2") => (need(h2, "algebra2")?, need(h1, "algebra")?),
                _ => return Err(malformed("inseparable witness without a valid `source`")),
            };
            let pair: (usize, usize) = serde_json::from_value(w["pair"].clone())
                .map_err(|_| malformed("inseparable witness without a `pair`"))?;
            if pair.0 >= from.size() || pair.1 >= from.size() || pair.0 == pair.1 {
                return Ok(Some("pair is not two distinct elements".into()));
            }
            let homs = from.enumerate_homs(to, caps)?;
            Ok(homs
                .iter()
                .find(|f| f.map[pair.0] != f.map[pair.1])
                .map(|f| format!("homomorphism {:?} separates {} and {}", f.map, pair.0, pair.1)))
        }
        other => Err(malformed(format!("unknown witness kind {other:?}"))),
    }
}

pub fn verify(path: &Path, caps: &Caps) -> CliResult<Outcome> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let report: Value = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    if report["schema"] != SCHEMA {
        return Err(malformed(format!("schema is not {SCHEMA}")));
    }
    let witnesses = report["witnesses"]
        .as_array()
        .ok_or_else(|| malformed("no `witnesses` list"))?;
    let h1 = algebra_input(&report, "algebra")?;
    let h2 = algebra_input(&report, "algebra2")?;
    let mut out = Outcome::new(true, String::new(), json!({}));
    let mut rows = Vec::new();
    for (i, w) in witnesses.iter().enumerate() {
        let failure = check(w, &h1, &h2, caps)?;
        let kind = w["kind"].as_str().unwrap_or_default();
        match &failure {
            None => {
                let _ = writeln!(out.text, "witness {i} ({kind}): valid");
            }
            Some(why) => {
                let _ = writeln!(out.text, "witness {i} ({kind}): INVALID, {why}");
            }
        }
        out.verdict &= failure.is_none();
        rows.push(json!({ "index": i, "kind": kind, "valid": failure.is_none(), "reason": failure }));
    }
    if witnesses.is_empty() {
        out.text.push_str("report has no witnesses\n");
    }
    out.result = json!({
        "command": report["command"],
        "witnesses": rows,
        "valid": out.verdict,
    });
    Ok(out)
}
