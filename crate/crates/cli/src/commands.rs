use std::fmt::Write;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use uag_core::dsl::{self, Document};
use uag_core::equiv::{
    almost_geo_equivalent, frobenius_automorphisms, geo_equivalent, mirror_closure_transport,
    mirror_system, mirror_transport_exhaustive, opposite, quasi_identity_holds,
    same_quasi_identities_up_to, twist, twist_closure_bijection, FieldAutomorphism, OracleWitness,
    QuasiIdentity,
};
use uag_core::functors::{
    alpha, build_category, duality_check, rho, tau, verify_inner_equivalence, AutomorphismSpec,
    InnerFamily,
};
use uag_core::galois::{acc_report, AffineSpace, PointSet};
use uag_core::partition::all_congruences;
use uag_core::term::var_names;
use uag_core::{checks, Caps, EquationSystem, FiniteAlgebra, FreeAlgebraRep, Partition, Relation};

use crate::report::{render, to_value, CliError, CliResult, Outcome};
use crate::{Cli, Command, Opts};

struct Ctx<'a> {
    opts: &'a Opts,
    caps: Caps,
    inputs: Map<String, Value>,
}

pub fn read_document(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    dsl::parse(&text).map_err(|e| CliError::Usage(format!("{}:{e}", path.display())))
}

fn parse_vars(s: &str) -> CliResult<Vec<String>> {
    let vars: Vec<String> = s.split(',').map(|v| v.trim().to_string()).collect();
    let ok = vars
        .iter()
        .all(|v| v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_alphanumeric() || c == '_'));
    if !ok {
        return Err(CliError::Usage(format!("--vars: `{s}` is not a comma-separated list of names")));
    }
    Ok(vars)
}

impl<'a> Ctx<'a> {
    fn new(opts: &'a Opts) -> Ctx<'a> {
        let mut caps = Caps::default();
        caps.points = opts.cap_points.unwrap_or(caps.points);
        caps.free = opts.cap_free.unwrap_or(caps.free);
        caps.homs = opts.cap_homs.unwrap_or(caps.homs);
        let mut inputs = Map::new();
        inputs.insert(
            "caps".into(),
            json!({"points": caps.points, "free": caps.free, "homs": caps.homs, "pairs": caps.pairs}),
        );
        Ctx { opts, caps, inputs }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.into(), v.into());
    }

    fn load_algebra(&mut self, second: bool) -> CliResult<FiniteAlgebra> {
        let (path, flag, key) = if second {
            (&self.opts.algebra2, "--algebra2", "algebra2")
        } else {
            (&self.opts.algebra, "--algebra", "algebra")
        };
        let path = path
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("this command needs {flag} FILE")))?;
        let h = read_document(path)?
            .algebra(None)
            .map_err(|e| CliError::Usage(format!("{}:{e}", path.display())))?;
        self.set(key, dsl::print_algebra(&h));
        Ok(h)
    }

    fn algebra(&mut self) -> CliResult<FiniteAlgebra> {
        self.load_algebra(false)
    }

    fn algebra2(&mut self) -> CliResult<FiniteAlgebra> {
        self.load_algebra(true)
    }

    fn document(&self) -> CliResult<Option<Document>> {
        self.opts.system.as_deref().map(read_document).transpose()
    }

    /// `--vars`, else the variables of `fallback`, else `x`.
    fn vars(&mut self, fallback: Option<&[String]>) -> CliResult<Vec<String>> {
        let vars = match (&self.opts.vars, fallback) {
            (Some(s), _) => parse_vars(s)?,
            (None, Some(v)) => v.to_vec(),
            (None, None) => var_names(1),
        };
        self.set("vars", to_value(&vars));
        Ok(vars)
    }

    fn system(&mut self) -> CliResult<Option<EquationSystem>> {
        let Some(doc) = self.document()? else {
            return Ok(None);
        };
        if !doc.has_system() {
            return Err(CliError::Usage("--system file has no `system` block".into()));
        }
        Ok(Some(doc.system(None)?))
    }

    fn quasi(&mut self) -> CliResult<Option<QuasiIdentity>> {
        let Some(doc) = self.document()? else {
            return Ok(None);
        };
        if !doc.has_quasi() {
            return Err(CliError::Usage("--system file has no `quasi` block".into()));
        }
        let q = doc.quasi(None)?;
        self.set("quasi", dsl::print_quasi("Q", &q));
        Ok(Some(q))
    }

    /// The system re-rooted on `vars`, recorded in the inputs.
    fn system_over(&mut self, system: Option<EquationSystem>, vars: &[String]) -> CliResult<EquationSystem> {
        let s = match system {
            Some(s) => EquationSystem::new(vars.to_vec(), s.pairs)?,
            None => EquationSystem::empty(vars.to_vec()),
        };
        self.set("system", dsl::print_system("T", &s));
        Ok(s)
    }

    fn max_vars(&mut self, default: usize) -> CliResult<usize> {
        let k = self.opts.max_vars.unwrap_or(default);
        if k == 0 {
            return Err(CliError::Usage("--max-vars must be at least 1".into()));
        }
        self.set("max_vars", k);
        Ok(k)
    }

    fn sigma(&mut self, h: &FiniteAlgebra, default: Option<&str>) -> CliResult<Option<FieldAutomorphism>> {
        let Some(spec) = self.opts.sigma.as_deref().or(default) else {
            return Ok(None);
        };
        let field = &h
            .signature()
            .scalars()
            .ok_or(uag_core::Error::NoScalarField)?
            .field;
        let sigma = match spec {
            "id" => FieldAutomorphism::identity(field),
            s => {
                let k = s
                    .strip_prefix("frob^")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| CliError::Usage(format!("--sigma: expected `id` or `frob^k`, got `{s}`")))?;
                FieldAutomorphism::frobenius_power(field, k)?
            }
        };
        self.set("sigma", spec);
        Ok(Some(sigma))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve => "solve",
        Command::Closure => "closure",
        Command::Member => "member",
        Command::Lattice => "lattice",
        Command::Acc => "acc",
        Command::Equiv => "equiv",
        Command::QuasiCheck => "quasi-check",
        Command::QuasiCompare => "quasi-compare",
        Command::Opposite => "opposite",
        Command::Twist => "twist",
        Command::Category => "category",
        Command::Duality => "duality",
        Command::TauRho => "tau-rho",
        Command::Alpha => "alpha",
        Command::AlmostEquiv => "almost-equiv",
        Command::VerifyWitness { .. } => "verify-witness",
    }
}

pub fn run(cli: &Cli) -> CliResult<u8> {
    let mut ctx = Ctx::new(&cli.opts);
    let outcome = match &cli.command {
        Command::Solve => solve(&mut ctx)?,
        Command::Closure => closure(&mut ctx)?,
        Command::Member => member(&mut ctx)?,
        Command::Lattice => lattice(&mut ctx)?,
        Command::Acc => acc(&mut ctx)?,
        Command::Equiv => equiv(&mut ctx)?,
        Command::QuasiCheck => quasi_check(&mut ctx)?,
        Command::QuasiCompare => quasi_compare(&mut ctx)?,
        Command::Opposite => opposite_cmd(&mut ctx)?,
        Command::Twist => twist_cmd(&mut ctx)?,
        Command::Category => category(&mut ctx, false)?,
        Command::Duality => category(&mut ctx, true)?,
        Command::TauRho => tau_rho(&mut ctx)?,
        Command::Alpha => alpha_cmd(&mut ctx)?,
        Command::AlmostEquiv => almost(&mut ctx)?,
        Command::VerifyWitness { report } => {
            ctx.set("report", report.display().to_string());
            crate::witness::verify(report, &ctx.caps)?
        }
    };
    print!("{}", outcome.text);
    if let Some(path) = &cli.opts.json {
        let text = render(command_name(&cli.command), ctx.inputs, &outcome);
        fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &cli.opts.dot {
        let dot = outcome
            .dot
            .as_ref()
            .ok_or_else(|| CliError::Usage("--dot is only supported by lattice and category".into()))?;
        fs::write(path, dot).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if outcome.verdict { 0 } else { 1 })
}

fn points_json(space: &AffineSpace, s: &PointSet) -> Value {
    to_value(&s.indices().into_iter().map(|i| space.point(i).values).collect::<Vec<_>>())
}

fn points_text(space: &AffineSpace, s: &PointSet) -> String {
    let pts: Vec<String> = s.indices().into_iter().map(|i| format!("({})", space.point(i))).collect();
    if pts.is_empty() {
        "(none)".into()
    } else {
        pts.join(" ")
    }
}

fn blocks_of(w: &FreeAlgebraRep, p: &Partition) -> Vec<Vec<String>> {
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&e| w.term(e).to_string()).collect())
        .collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn solve(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let system = ctx
        .system()?
        .ok_or_else(|| CliError::Usage("solve needs --system FILE".into()))?;
    let vars = ctx.vars(Some(&system.vars))?;
    let system = ctx.system_over(Some(system), &vars)?;
    let space = AffineSpace::new(&h, &vars, &ctx.caps)?;
    let sol = space.solve(&system)?;
    let text = format!(
        "T' for {system} in {}: {} of {} points\n  {}\n",
        h.name(),
        sol.count(),
        space.num_points(),
        points_text(&space, &sol)
    );
    let result = json!({
        "count": sol.count(),
        "num_points": space.num_points(),
        "points": points_json(&space, &sol),
    });
    Ok(Outcome::new(true, text, result))
}

fn closure(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let system = ctx.system()?;
    let vars = ctx.vars(system.as_ref().map(|s| s.vars.as_slice()))?;
    let system = ctx.system_over(system, &vars)?;
    let space = AffineSpace::new(&h, &vars, &ctx.caps)?;
    let c = space.closure_of_system(&system)?;
    let blocks = blocks_of(space.free(), &c.partition);
    let diagonal = c.partition.is_discrete();
    let mut text = format!(
        "T'' for {system} in {}: {} blocks on {} free elements{}\n",
        h.name(),
        blocks.len(),
        space.num_elements(),
        if diagonal { " (diagonal)" } else { "" }
    );
    for b in &blocks {
        let _ = writeln!(text, "  {{{}}}", b.join(", "));
    }
    let _ = writeln!(
        text,
        "T' has {} of {} points: {}",
        c.points.count(),
        space.num_points(),
        points_text(&space, &c.points)
    );
    let result = json!({
        "blocks": blocks,
        "diagonal": diagonal,
        "free_size": space.num_elements(),
        "points": points_json(&space, &c.points),
    });
    Ok(Outcome::new(true, text, result))
}

fn counterexample_witness(q: &QuasiIdentity, point: &uag_core::Point) -> Value {
    json!({
        "kind": "counterexample",
        "quasi": dsl::print_quasi("Q", q),
        "point": point.values,
    })
}

fn member(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let q = ctx.quasi()?;
    if q.is_none() && ctx.opts.seed.is_none() {
        return Err(CliError::Usage("member needs --system FILE with a quasi block, or --seed N".into()));
    }
    let mut out = Outcome::new(true, String::new(), json!({}));
    if let Some(q) = q {
        let vars = ctx.vars(Some(&q.vars))?;
        let system = EquationSystem::new(vars.clone(), q.premises.clone())?;
        let space = AffineSpace::new(&h, &vars, &ctx.caps)?;
        let (w0, w0p) = &q.conclusion;
        let direct = space.membership(w0, w0p, &system, &ctx.caps)?;
        let closure = space.closure_of_system(&system)?;
        let lookup = closure
            .partition
            .same(space.element_of(w0)?, space.element_of(w0p)?);
        let _ = writeln!(
            out.text,
            "{q} in {}: {}\n  direct evaluation: {}, closure lookup: {}",
            h.name(),
            if direct.holds { "holds" } else { "fails" },
            yes(direct.holds),
            yes(lookup)
        );
        if let Some(p) = &direct.counterexample {
            let _ = writeln!(out.text, "  counterexample: {p}");
            out.witnesses.push(counterexample_witness(&q, p));
        }
        out.verdict = direct.holds && lookup == direct.holds;
        out.result["holds"] = json!(direct.holds);
        out.result["closure_lookup"] = json!(lookup);
        out.result["agree"] = json!(lookup == direct.holds);
    }
    if let Some(seed) = ctx.opts.seed {
        ctx.set("seed", seed);
        ctx.set("cases", ctx.opts.cases);
        let k = ctx.max_vars(2)?;
        let mut suites = Vec::new();
        for vars in 1..=k {
            for r in [
                checks::galois_laws(&h, vars, ctx.opts.cases, seed, &ctx.caps)?,
                checks::membership_agreement(&h, vars, ctx.opts.cases, seed, &ctx.caps)?,
            ] {
                let _ = writeln!(
                    out.text,
                    "suite {} on {} with {} var(s): {} random + {} exhaustive cases, {} failures",
                    r.suite, r.algebra, r.vars, r.random_cases, r.exhaustive_cases, r.failures
                );
                if let Some(f) = &r.first_failure {
                    let _ = writeln!(out.text, "  first failure: {f}");
                }
                out.verdict &= r.passed();
                suites.push(to_value(&r));
            }
        }
        out.result["suites"] = Value::Array(suites);
    }
    Ok(out)
}

fn lattice(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let vars = ctx.vars(None)?;
    let space = AffineSpace::new(&h, &vars, &ctx.caps)?;
    let report = space.lattice(&ctx.caps)?;
    let duality = space.lattice_duality_holds(&report);
    let mut text = format!(
        "algebraic sets of {} over {}: {} nodes, height {}\n",
        h.name(),
        vars.join(","),
        report.nodes.len(),
        report.height
    );
    for (i, n) in report.nodes.iter().enumerate() {
        let _ = writeln!(
            text,
            "  {i}: {} point(s), {} blocks  [{}]",
            n.points.count(),
            n.congruence.num_blocks(),
            n.label
        );
    }
    let covers: Vec<String> = report.edges.iter().map(|(a, b)| format!("{a}<{b}")).collect();
    let _ = writeln!(text, "covers: {}", covers.join(" "));
    let _ = writeln!(text, "empty set closed: {}", yes(report.empty_is_closed));
    let _ = writeln!(text, "A -> A' anti-isomorphism onto closed congruences: {}", yes(duality));
    let mut result = to_value(&report);
    result["duality"] = json!(duality);
    let mut out = Outcome::new(true, text, result);
    out.dot = Some(report.to_dot());
    Ok(out)
}

fn acc(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let vars = ctx.vars(None)?;
    let space = AffineSpace::new(&h, &vars, &ctx.caps)?;
    let lattice = space.lattice(&ctx.caps)?;
    let r = acc_report(&lattice);
    let labels: Vec<&str> = r.chain.iter().map(|&i| lattice.nodes[i].label.as_str()).collect();
    let text = format!(
        "closed congruences of W({}) over {}: {} nodes, longest ascending chain has {} nodes, stabilizes: {}\n  {}\n",
        vars.join(","),
        h.name(),
        lattice.nodes.len(),
        r.max_chain_length,
        yes(r.stabilizes),
        labels.join("  <  ")
    );
    Ok(Outcome::new(true, text, to_value(&r)))
}

fn oracle_witness(w: &OracleWitness) -> Value {
    json!({
        "kind": "oracle",
        "quasi": dsl::print_quasi("Q", &w.quasi_identity()),
        "in_first": w.in_first,
    })
}

fn describe_oracle(w: &OracleWitness, h1: &FiniteAlgebra, h2: &FiniteAlgebra) -> String {
    let (yes_in, no_in) = if w.in_first { (h1, h2) } else { (h2, h1) };
    format!(
        "{}  holds in {}, fails in {}",
        w.quasi_identity(),
        yes_in.name(),
        no_in.name()
    )
}

fn equiv(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h1 = ctx.algebra()?;
    let h2 = ctx.algebra2()?;
    let v = geo_equivalent(&h1, &h2, true, &ctx.caps)?;
    let mut out = Outcome::new(v.equivalent, String::new(), to_value(&v));
    let _ = writeln!(
        out.text,
        "{} and {}: {}geometrically equivalent",
        h1.name(),
        h2.name(),
        if v.equivalent { "" } else { "not " }
    );
    for (from, to, sep, key) in [
        (&h1, &h2, &v.first_in_second, "algebra"),
        (&h2, &h1, &v.second_in_first, "algebra2"),
    ] {
        let _ = write!(
            out.text,
            "  Hom({}, {}) separates points: {} ({} homomorphisms)",
            from.name(),
            to.name(),
            yes(sep.separated),
            sep.hom_count
        );
        if let Some((a, b)) = sep.witness {
            let _ = write!(out.text, "; {a} and {b} are never separated");
            out.witnesses.push(json!({"kind": "inseparable", "source": key, "pair": [a, b]}));
        }
        out.text.push('\n');
    }
    if let Some(w) = &v.oracle_witness {
        let _ = writeln!(out.text, "  oracle witness: {}", describe_oracle(w, &h1, &h2));
        out.witnesses.push(oracle_witness(w));
    }
    if v.oracle_equivalent != Some(v.equivalent) {
        let _ = writeln!(out.text, "  warning: closure oracle disagrees with the separation verdict");
    }
    Ok(out)
}

fn quasi_check(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let q = ctx
        .quasi()?
        .ok_or_else(|| CliError::Usage("quasi-check needs --system FILE with a quasi block".into()))?;
    let m = quasi_identity_holds(&q, &h, &ctx.caps)?;
    let mut out = Outcome::new(
        m.holds,
        format!("{q} in {}: {}\n", h.name(), if m.holds { "holds" } else { "fails" }),
        to_value(&m),
    );
    if let Some(p) = &m.counterexample {
        let _ = writeln!(out.text, "  counterexample: {p}");
        out.witnesses.push(counterexample_witness(&q, p));
    }
    Ok(out)
}

fn quasi_compare(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h1 = ctx.algebra()?;
    let h2 = ctx.algebra2()?;
    let k = ctx.max_vars(2)?;
    ctx.set("depth", ctx.opts.depth);
    ctx.set("max_premises", ctx.opts.max_premises);
    let c = same_quasi_identities_up_to(&h1, &h2, ctx.opts.depth, k, ctx.opts.max_premises, &ctx.caps)?;
    let mut out = Outcome::new(
        c.agree,
        format!(
            "{} and {}: quasi-identities of depth <= {}, <= {} premises, <= {} variables {}agree ({} classes compared)\n",
            h1.name(),
            h2.name(),
            ctx.opts.depth,
            ctx.opts.max_premises,
            k,
            if c.agree { "" } else { "dis" },
            c.classes_checked
        ),
        to_value(&c),
    );
    if let Some(w) = &c.witness {
        let _ = writeln!(out.text, "  witness: {}", describe_oracle(w, &h1, &h2));
        out.witnesses.push(oracle_witness(w));
    }
    Ok(out)
}

fn opposite_cmd(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let system = ctx.system()?;
    let vars = ctx.vars(system.as_ref().map(|s| s.vars.as_slice()))?;
    let op = opposite(&h)?;
    let dsl_text = dsl::print_algebra(&op);
    let mut text = format!("opposite of {}:\n{dsl_text}", h.name());
    let mut result = json!({ "opposite": dsl_text });
    let mut verdict = true;
    if let Some(system) = system {
        let system = ctx.system_over(Some(system), &vars)?;
        let mirrored = mirror_system(&system, &h)?;
        let r = mirror_closure_transport(&h, &vars, &system, &ctx.caps)?;
        let _ = writeln!(text, "mirror of {system}: {mirrored}\n  closure transport: {}", yes(r.holds));
        result["mirror"] = json!(mirrored.to_string());
        result["system_transport"] = to_value(&r);
        verdict &= r.holds;
    }
    let r = mirror_transport_exhaustive(&h, &vars, &ctx.caps)?;
    let _ = writeln!(
        text,
        "closure transport over {} for all single equations: {} ({} systems)",
        vars.join(","),
        yes(r.holds),
        r.systems_checked
    );
    if let Some(f) = &r.failure {
        let _ = writeln!(text, "  failure: {f}");
    }
    verdict &= r.holds;
    result["transport"] = to_value(&r);
    Ok(Outcome::new(verdict, text, result))
}

fn twist_cmd(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let sigma = ctx.sigma(&h, Some("frob^1"))?.expect("defaulted");
    let vars = ctx.vars(None)?;
    let ht = twist(&h, &sigma)?;
    let back = twist(&ht, &sigma.inverse())?;
    let roundtrip = back == h;
    let r = twist_closure_bijection(&h, &sigma, &vars, &ctx.caps)?;
    let dsl_text = dsl::print_algebra(&ht);
    let mut text = format!("twist of {} by {:?}:\n{dsl_text}", h.name(), sigma.perm());
    let _ = writeln!(text, "untwisting recovers {}: {}", h.name(), yes(roundtrip));
    let _ = writeln!(
        text,
        "T -> sigma_W T order-isomorphism over {} ({} free elements, {} closed congruences): {}",
        vars.join(","),
        r.free_size,
        r.nodes,
        yes(r.holds)
    );
    if let Some(f) = &r.failure {
        let _ = writeln!(text, "  failure: {f}");
    }
    let result = json!({ "twisted": dsl_text, "roundtrip": roundtrip, "bijection": to_value(&r) });
    Ok(Outcome::new(r.holds && roundtrip, text, result))
}

fn category(ctx: &mut Ctx, duality: bool) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let k = ctx.max_vars(1)?;
    let slice = build_category(&h, k, &ctx.caps)?;
    let mut text = format!(
        "algebraic sets over {} with at most {k} variable(s): {} objects, {} arrows, {} skeleton classes\n",
        h.name(),
        slice.objects.len(),
        slice.arrows.len(),
        slice.skeleton.len()
    );
    for (i, o) in slice.objects.iter().enumerate() {
        let _ = writeln!(
            text,
            "  {i}: [{}] over {}, {} point(s), dual quotient of size {}",
            o.label,
            o.vars.join(","),
            o.points.count(),
            o.dual_size
        );
    }
    let classes: Vec<String> = slice
        .skeleton
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let _ = writeln!(text, "skeleton: {}", classes.join(" "));
    let mut result = to_value(&slice);
    let mut verdict = true;
    if duality {
        let d = duality_check(&slice, &ctx.caps)?;
        let _ = writeln!(
            text,
            "Hom((X,A),(Y,B)) ~ Hom(W(Y)/B', W(X)/A') on {} object pairs: {}",
            d.pairs_checked,
            yes(d.holds)
        );
        if let Some(f) = &d.failure {
            let _ = writeln!(text, "  failure: {f}");
        }
        verdict = d.holds;
        result = json!({ "objects": slice.objects.len(), "duality": to_value(&d) });
    }
    let mut out = Outcome::new(verdict, text, result);
    out.dot = Some(slice.to_dot());
    Ok(out)
}

fn free_objects(ctx: &mut Ctx, h: &FiniteAlgebra, default_max: usize) -> CliResult<Vec<Arc<FreeAlgebraRep>>> {
    let var_sets = if ctx.opts.vars.is_some() {
        vec![ctx.vars(None)?]
    } else {
        (1..=ctx.max_vars(default_max)?).map(var_names).collect()
    };
    var_sets
        .iter()
        .map(|v| Ok(Arc::new(FreeAlgebraRep::new(h, v, &ctx.caps)?)))
        .collect()
}

fn tau_rho(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let strict = ctx.opts.strict_tau;
    ctx.set("strict_tau", strict);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut verdict = true;
    for w in free_objects(ctx, &h, 2)? {
        let congruences = all_congruences(w.algebra(), ctx.caps.free)?;
        let mut failures = 0;
        let mut first = None;
        for t in &congruences {
            let back = tau(&rho(&w, t, &ctx.caps)?, strict);
            if back != Relation::from_partition(t) {
                failures += 1;
                first.get_or_insert_with(|| blocks_of(&w, t));
            }
        }
        let _ = writeln!(
            text,
            "tau rho (T) = T over {}: {} congruences, {} failures",
            w.vars().join(","),
            congruences.len(),
            failures
        );
        verdict &= failures == 0;
        rows.push(json!({
            "vars": w.vars(),
            "free_size": w.size(),
            "congruences": congruences.len(),
            "failures": failures,
            "first_failure": first,
        }));
    }
    Ok(Outcome::new(verdict, text, json!({ "objects": rows })))
}

fn alpha_cmd(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h = ctx.algebra()?;
    let objects = free_objects(ctx, &h, 2)?;
    let Some(sigma) = ctx.sigma(&h, None)? else {
        let family = InnerFamily::transposition(&objects)?;
        let r = verify_inner_equivalence(&family, &ctx.caps)?;
        let mut text = format!(
            "inner automorphism (swap the first two generators) on {} object(s): alpha(phi)_W(T) = s_W T for {} closed congruences: {}\n",
            r.objects,
            r.congruences_checked,
            yes(r.holds)
        );
        if let Some(f) = &r.failure {
            let _ = writeln!(text, "  failure: {f}");
        }
        return Ok(Outcome::new(r.holds, text, json!({ "automorphism": "inner", "report": to_value(&r) })));
    };
    let phi = AutomorphismSpec::ScalarTwist(sigma.clone());
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut verdict = true;
    for w in &objects {
        let space = AffineSpace::over(w.clone(), &h, &ctx.caps)?;
        let lattice = space.lattice(&ctx.caps)?;
        for (i, node) in lattice.nodes.iter().enumerate() {
            let a = alpha(&phi, w, &node.congruence, &ctx.caps)?;
            let moved = phi.transport(w, &node.congruence)?;
            let image = lattice.nodes.iter().position(|n| n.congruence == a);
            let ok = a == moved;
            verdict &= ok;
            let _ = writeln!(
                text,
                "  over {}: node {i} [{}] -> {}{}",
                w.vars().join(","),
                node.label,
                image.map_or_else(|| "a congruence that is not H-closed".into(), |j| format!("node {j} [{}]", lattice.nodes[j].label)),
                if ok { "" } else { "  (differs from sigma_W T)" }
            );
            rows.push(json!({ "vars": w.vars(), "node": i, "image": image, "matches_transport": ok }));
        }
    }
    let text = format!(
        "scalar twist automorphism {:?} acting on closed congruences: alpha(phi)_W(T) = sigma_W T: {}\n{text}",
        sigma.perm(),
        yes(verdict)
    );
    Ok(Outcome::new(verdict, text, json!({ "automorphism": "twist", "images": rows })))
}

fn almost(ctx: &mut Ctx) -> CliResult<Outcome> {
    let h1 = ctx.algebra()?;
    let h2 = ctx.algebra2()?;
    let r = almost_geo_equivalent(&h1, &h2, &ctx.caps)?;
    let mut text = format!(
        "{} and {}: {}almost geometrically equivalent ({} candidates tried)\n",
        h1.name(),
        h2.name(),
        if r.holds { "" } else { "not " },
        r.tried
    );
    for step in &r.chain {
        let _ = writeln!(text, "  {step}");
    }
    if h1.signature().scalars().is_some() {
        let n = frobenius_automorphisms(&h1.signature().scalars().unwrap().field)?.len();
        let _ = writeln!(text, "  field automorphisms considered: {n}");
    }
    Ok(Outcome::new(r.holds, text, to_value(&r)))
}
