//! Text format for algebras, fields, equation systems and quasi-identities.
//!
//! ```text
//! doc     := (algebra | system | quasi | field)* ;
//! algebra := "algebra" NAME "{" "carrier" INT (opdef)* (flag)* "}" ;
//! opdef   := "op" NAME "/" INT "table" nested-int-array ;
//! flag    := "product" NAME | "scalars" NAME ;
//! system  := "system" NAME "over" varlist "{" (term "=" term)* "}" ;
//! quasi   := "quasi" NAME "over" varlist "{" (term "=" term)* "=>" term "=" term "}" ;
//! field   := "field" NAME "{" "p" INT "k" INT "addtable" array "multable" array "}" ;
//! term    := VAR | NAME "(" term ("," term)* ")" | NAME ;
//! ```
//!
//! `varlist` is a comma-separated list of names. Inside a system a bare name
//! is a variable when it is listed, otherwise a constant. `#` starts a
//! comment running to the end of the line.

use std::fmt::{self, Write};
use std::sync::Arc;

use crate::algebra::{scale_symbol, FiniteAlgebra, OpSymbol, ScalarField, Signature};
use crate::equiv::QuasiIdentity;
use crate::error::{Error, Result};
use crate::galois::EquationSystem;
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

/// A nested array of nonnegative integers, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntArray {
    Int(usize),
    List(Vec<IntArray>),
}

impl IntArray {
    /// Row-major entries if the array is a full `n x ... x n` cube of the
    /// given depth.
    fn flatten(&self, n: usize, depth: usize, out: &mut Vec<usize>) -> std::result::Result<(), String> {
        match (self, depth) {
            (IntArray::Int(v), 0) => {
                out.push(*v);
                Ok(())
            }
            (IntArray::List(items), d) if d > 0 => {
                if items.len() != n {
                    return Err(format!("expected {n} entries, found {}", items.len()));
                }
                items.iter().try_for_each(|i| i.flatten(n, d - 1, out))
            }
            (IntArray::Int(_), _) => Err("table nested too shallowly".into()),
            (IntArray::List(_), _) => Err("table nested too deeply".into()),
        }
    }

    fn square(rows: &[Vec<usize>]) -> IntArray {
        IntArray::List(
            rows.iter()
                .map(|r| IntArray::List(r.iter().map(|&v| IntArray::Int(v)).collect()))
                .collect(),
        )
    }

    /// Builds the nested form of a flat table of `n^depth` entries.
    fn from_flat(n: usize, depth: usize, flat: &[usize]) -> IntArray {
        if depth == 0 {
            return IntArray::List(flat.iter().map(|&v| IntArray::Int(v)).collect());
        }
        fn nest(n: usize, depth: usize, flat: &[usize]) -> IntArray {
            if depth == 0 {
                return IntArray::Int(flat[0]);
            }
            let chunk = flat.len() / n;
            IntArray::List((0..n).map(|i| nest(n, depth - 1, &flat[i * chunk..(i + 1) * chunk])).collect())
        }
        nest(n, depth, flat)
    }
}

impl fmt::Display for IntArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntArray::Int(v) => write!(f, "{v}"),
            IntArray::List(items) => {
                write!(f, "[")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{it}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDef {
    pub name: String,
    pub arity: usize,
    pub table: IntArray,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    Product(String),
    Scalars(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDef {
    pub name: String,
    pub carrier: usize,
    pub ops: Vec<OpDef>,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDef {
    pub name: String,
    pub p: usize,
    pub k: usize,
    pub add: IntArray,
    pub mul: IntArray,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDef {
    pub name: String,
    pub vars: Vec<String>,
    pub equations: Vec<(Term, Term)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiDef {
    pub name: String,
    pub vars: Vec<String>,
    pub premises: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Algebra(AlgebraDef),
    System(SystemDef),
    Quasi(QuasiDef),
    Field(FieldDef),
}

impl Block {
    pub fn name(&self) -> &str {
        match self {
            Block::Algebra(a) => &a.name,
            Block::System(s) => &s.name,
            Block::Quasi(q) => &q.name,
            Block::Field(f) => &f.name,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Block::Algebra(_) => "algebra",
            Block::System(_) => "system",
            Block::Quasi(_) => "quasi",
            Block::Field(_) => "field",
        }
    }
}

/// Parsed blocks with the position of each block keyword. Equality
/// compares blocks only.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub blocks: Vec<Block>,
    pub spans: Vec<Span>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for Document {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

fn err(span: Span, message: impl Into<String>) -> Error {
    Error::Parse {
        line: span.line,
        column: span.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(char::is_ascii_digit) {
                s.push(bump(&mut chars).unwrap());
            }
            let v = s.parse().map_err(|_| err(span, format!("integer `{s}` too large")))?;
            out.push((Tok::Int(v), span));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|&c| c.is_alphanumeric() || c == '_') {
                s.push(bump(&mut chars).unwrap());
            }
            out.push((Tok::Ident(s), span));
        } else {
            bump(&mut chars);
            let sym = match c {
                '{' => "{",
                '}' => "}",
                '(' => "(",
                ')' => ")",
                '[' => "[",
                ']' => "]",
                ',' => ",",
                '/' => "/",
                '=' if chars.peek() == Some(&'>') => {
                    bump(&mut chars);
                    "=>"
                }
                '=' => "=",
                other => return Err(err(span, format!("unexpected character `{other}`"))),
            };
            out.push((Tok::Sym(sym), span));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn next(&mut self, what: &str) -> Result<(Tok, Span)> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| err(self.end, format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn sym(&mut self, s: &'static str) -> Result<Span> {
        match self.next(&format!("`{s}`"))? {
            (Tok::Sym(t), span) if t == s => Ok(span),
            (t, span) => Err(err(span, format!("expected `{s}`, found {t}"))),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Span> {
        match self.next(&format!("`{kw}`"))? {
            (Tok::Ident(t), span) if t == kw => Ok(span),
            (t, span) => Err(err(span, format!("expected `{kw}`, found {t}"))),
        }
    }

    fn name(&mut self) -> Result<(String, Span)> {
        match self.next("a name")? {
            (Tok::Ident(t), span) => Ok((t, span)),
            (t, span) => Err(err(span, format!("expected a name, found {t}"))),
        }
    }

    fn int(&mut self) -> Result<(usize, Span)> {
        match self.next("an integer")? {
            (Tok::Int(v), span) => Ok((v, span)),
            (t, span) => Err(err(span, format!("expected an integer, found {t}"))),
        }
    }

    fn array(&mut self) -> Result<IntArray> {
        if !self.is_sym("[") {
            let (v, _) = self.int()?;
            return Ok(IntArray::Int(v));
        }
        self.sym("[")?;
        let mut items = Vec::new();
        if !self.is_sym("]") {
            items.push(self.array()?);
            while self.is_sym(",") {
                self.sym(",")?;
                items.push(self.array()?);
            }
        }
        self.sym("]")?;
        Ok(IntArray::List(items))
    }

    fn varlist(&mut self) -> Result<Vec<String>> {
        let mut vars = Vec::new();
        loop {
            let (v, span) = self.name()?;
            if vars.contains(&v) {
                return Err(err(span, format!("variable `{v}` listed twice")));
            }
            vars.push(v);
            if !self.is_sym(",") {
                return Ok(vars);
            }
            self.sym(",")?;
        }
    }

    fn term(&mut self, vars: &[String]) -> Result<Term> {
        let (name, _) = self.name()?;
        if self.is_sym("(") {
            self.sym("(")?;
            let mut args = vec![self.term(vars)?];
            while self.is_sym(",") {
                self.sym(",")?;
                args.push(self.term(vars)?);
            }
            self.sym(")")?;
            return Ok(Term::App(name, args));
        }
        Ok(if vars.contains(&name) {
            Term::Var(name)
        } else {
            Term::App(name, Vec::new())
        })
    }

    fn equation(&mut self, vars: &[String]) -> Result<(Term, Term)> {
        let l = self.term(vars)?;
        self.sym("=")?;
        let r = self.term(vars)?;
        Ok((l, r))
    }

    fn algebra(&mut self) -> Result<AlgebraDef> {
        let (name, _) = self.name()?;
        self.sym("{")?;
        self.keyword("carrier")?;
        let (carrier, cspan) = self.int()?;
        if carrier == 0 {
            return Err(err(cspan, "carrier must be at least 1"));
        }
        let mut ops: Vec<OpDef> = Vec::new();
        while self.is_kw("op") {
            self.keyword("op")?;
            let (op, span) = self.name()?;
            if ops.iter().any(|o| o.name == op) {
                return Err(err(span, format!("duplicate symbol `{op}`")));
            }
            self.sym("/")?;
            let (arity, _) = self.int()?;
            self.keyword("table")?;
            let tspan = self.span();
            let table = self.array()?;
            let mut flat = Vec::new();
            let shape = if arity == 0 {
                match &table {
                    IntArray::List(items) if items.len() == 1 => items[0].flatten(carrier, 0, &mut flat),
                    _ => Err("a nullary table is written `[k]`".to_string()),
                }
            } else {
                table.flatten(carrier, arity, &mut flat)
            };
            shape.map_err(|m| err(tspan, format!("table of `{op}`: {m}")))?;
            if let Some(e) = flat.iter().find(|&&e| e >= carrier) {
                return Err(err(tspan, format!("table of `{op}`: entry {e} out of range")));
            }
            ops.push(OpDef {
                name: op,
                arity,
                table,
            });
        }
        let mut flags = Vec::new();
        loop {
            if self.is_kw("product") {
                let span = self.keyword("product")?;
                let (p, _) = self.name()?;
                if flags.iter().any(|f| matches!(f, Flag::Product(_))) {
                    return Err(err(span, "more than one product designation"));
                }
                match ops.iter().find(|o| o.name == p) {
                    None => return Err(err(span, format!("product `{p}` is not declared"))),
                    Some(o) if o.arity != 2 => {
                        return Err(err(span, format!("product `{p}` is not binary")))
                    }
                    _ => {}
                }
                flags.push(Flag::Product(p));
            } else if self.is_kw("scalars") {
                let span = self.keyword("scalars")?;
                let (f, _) = self.name()?;
                if flags.iter().any(|f| matches!(f, Flag::Scalars(_))) {
                    return Err(err(span, "more than one scalars block"));
                }
                flags.push(Flag::Scalars(f));
            } else {
                break;
            }
        }
        self.sym("}")?;
        Ok(AlgebraDef {
            name,
            carrier,
            ops,
            flags,
        })
    }

    fn field(&mut self) -> Result<FieldDef> {
        let (name, _) = self.name()?;
        self.sym("{")?;
        self.keyword("p")?;
        let (p, _) = self.int()?;
        self.keyword("k")?;
        let (k, _) = self.int()?;
        self.keyword("addtable")?;
        let add = self.array()?;
        self.keyword("multable")?;
        let mul = self.array()?;
        self.sym("}")?;
        Ok(FieldDef { name, p, k, add, mul })
    }

    fn system(&mut self) -> Result<SystemDef> {
        let (name, _) = self.name()?;
        self.keyword("over")?;
        let vars = self.varlist()?;
        self.sym("{")?;
        let mut equations = Vec::new();
        while !self.is_sym("}") {
            equations.push(self.equation(&vars)?);
        }
        self.sym("}")?;
        Ok(SystemDef { name, vars, equations })
    }

    fn quasi(&mut self) -> Result<QuasiDef> {
        let (name, _) = self.name()?;
        self.keyword("over")?;
        let vars = self.varlist()?;
        self.sym("{")?;
        let mut premises = Vec::new();
        while !self.is_sym("=>") {
            if self.peek().is_none() || self.is_sym("}") {
                return Err(err(self.span(), "expected `=>` before the conclusion"));
            }
            premises.push(self.equation(&vars)?);
        }
        self.sym("=>")?;
        let conclusion = self.equation(&vars)?;
        self.sym("}")?;
        Ok(QuasiDef {
            name,
            vars,
            premises,
            conclusion,
        })
    }
}

/// Parses a document, checking table shapes, entry ranges, duplicate
/// symbols and duplicate block names.
pub fn parse(text: &str) -> Result<Document> {
    let toks = lex(text)?;
    let end = text.lines().count().max(1);
    let mut p = Parser {
        toks,
        pos: 0,
        end: Span {
            line: end,
            column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
        },
    };
    let mut doc = Document::default();
    while p.peek().is_some() {
        let (kw, span) = p.name()?;
        let block = match kw.as_str() {
            "algebra" => Block::Algebra(p.algebra()?),
            "system" => Block::System(p.system()?),
            "quasi" => Block::Quasi(p.quasi()?),
            "field" => Block::Field(p.field()?),
            other => {
                return Err(err(
                    span,
                    format!("expected `algebra`, `system`, `quasi` or `field`, found `{other}`"),
                ))
            }
        };
        if doc
            .blocks
            .iter()
            .any(|b| b.kind() == block.kind() && b.name() == block.name())
        {
            return Err(err(span, format!("duplicate {} `{}`", block.kind(), block.name())));
        }
        doc.blocks.push(block);
        doc.spans.push(span);
    }
    Ok(doc)
}

fn write_equation(out: &mut String, (l, r): &(Term, Term)) {
    let _ = writeln!(out, "  {l} = {r}");
}

/// Canonical text of a document; parsing it gives back the same blocks.
pub fn print(doc: &Document) -> String {
    let mut out = String::new();
    for (i, b) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match b {
            Block::Algebra(a) => {
                let _ = writeln!(out, "algebra {} {{", a.name);
                let _ = writeln!(out, "  carrier {}", a.carrier);
                for op in &a.ops {
                    let _ = writeln!(out, "  op {}/{} table {}", op.name, op.arity, op.table);
                }
                for f in &a.flags {
                    match f {
                        Flag::Product(p) => {
                            let _ = writeln!(out, "  product {p}");
                        }
                        Flag::Scalars(s) => {
                            let _ = writeln!(out, "  scalars {s}");
                        }
                    }
                }
                out.push_str("}\n");
            }
            Block::Field(f) => {
                let _ = writeln!(out, "field {} {{", f.name);
                let _ = writeln!(out, "  p {} k {}", f.p, f.k);
                let _ = writeln!(out, "  addtable {}", f.add);
                let _ = writeln!(out, "  multable {}", f.mul);
                out.push_str("}\n");
            }
            Block::System(s) => {
                let _ = writeln!(out, "system {} over {} {{", s.name, s.vars.join(","));
                for e in &s.equations {
                    write_equation(&mut out, e);
                }
                out.push_str("}\n");
            }
            Block::Quasi(q) => {
                let _ = writeln!(out, "quasi {} over {} {{", q.name, q.vars.join(","));
                for e in &q.premises {
                    write_equation(&mut out, e);
                }
                let _ = writeln!(out, "  => {} = {}", q.conclusion.0, q.conclusion.1);
                out.push_str("}\n");
            }
        }
    }
    out
}

impl Document {
    fn span_of(&self, kind: &str, name: &str) -> Span {
        self.blocks
            .iter()
            .position(|b| b.kind() == kind && b.name() == name)
            .map_or_else(Span::default, |i| self.spans[i])
    }

    pub fn algebra_names(&self) -> Vec<&str> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::Algebra(a) => Some(a.name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn field(&self, name: &str) -> Result<ScalarField> {
        let def = self
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::Field(f) if f.name == name => Some(f),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidField(format!("no field `{name}` in document")))?;
        let at = self.span_of("field", name);
        let square = |t: &IntArray| -> Result<Vec<Vec<usize>>> {
            match t {
                IntArray::List(rows) => rows
                    .iter()
                    .map(|r| match r {
                        IntArray::List(cells) => cells
                            .iter()
                            .map(|c| match c {
                                IntArray::Int(v) => Ok(*v),
                                _ => Err(err(at, "field tables are two-dimensional")),
                            })
                            .collect(),
                        _ => Err(err(at, "field tables are two-dimensional")),
                    })
                    .collect(),
                _ => Err(err(at, "field tables are two-dimensional")),
            }
        };
        ScalarField::new(def.name.clone(), def.p, def.k, square(&def.add)?, square(&def.mul)?)
            .map_err(|e| err(at, e.to_string()))
    }

    /// Builds the named algebra (the first one when `name` is `None`).
    pub fn algebra(&self, name: Option<&str>) -> Result<FiniteAlgebra> {
        let def = self
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::Algebra(a) if name.map_or(true, |n| n == a.name) => Some(a),
                _ => None,
            })
            .ok_or_else(|| {
                Error::InvalidAlgebra(match name {
                    Some(n) => format!("no algebra `{n}` in document"),
                    None => "document contains no algebra".into(),
                })
            })?;
        let at = self.span_of("algebra", &def.name);
        let wrap = |e: Error| err(at, e.to_string());
        let mut sig = Signature::new(
            def.ops.iter().map(|o| OpSymbol::new(o.name.clone(), o.arity)).collect(),
        )
        .map_err(wrap)?;
        for flag in &def.flags {
            sig = match flag {
                Flag::Product(p) => sig.with_product(p).map_err(wrap)?,
                Flag::Scalars(f) => {
                    let field = self.field(f)?;
                    for l in 0..field.order() {
                        let s = scale_symbol(l);
                        if !def.ops.iter().any(|o| o.name == s) {
                            return Err(err(at, format!("scalars {f}: missing table for `{s}/1`")));
                        }
                    }
                    sig.with_scalars(field).map_err(wrap)?
                }
            };
        }
        let tables = def
            .ops
            .iter()
            .map(|o| {
                let mut flat = Vec::new();
                match (&o.table, o.arity) {
                    (IntArray::List(items), 0) => items[0].flatten(def.carrier, 0, &mut flat),
                    (t, a) => t.flatten(def.carrier, a, &mut flat),
                }
                .map_err(|m| err(at, m))?;
                Ok(flat)
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(def.name.clone(), Arc::new(sig), def.carrier, tables).map_err(wrap)
    }

    pub fn system(&self, name: Option<&str>) -> Result<EquationSystem> {
        let def = self
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::System(s) if name.map_or(true, |n| n == s.name) => Some(s),
                _ => None,
            })
            .ok_or_else(|| Error::DomainMismatch("no matching system in document".into()))?;
        EquationSystem::new(def.vars.clone(), def.equations.clone())
    }

    pub fn quasi(&self, name: Option<&str>) -> Result<QuasiIdentity> {
        let def = self
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::Quasi(q) if name.map_or(true, |n| n == q.name) => Some(q),
                _ => None,
            })
            .ok_or_else(|| Error::DomainMismatch("no matching quasi block in document".into()))?;
        QuasiIdentity::new(def.vars.clone(), def.premises.clone(), def.conclusion.clone())
    }

    pub fn has_quasi(&self) -> bool {
        self.blocks.iter().any(|b| matches!(b, Block::Quasi(_)))
    }

    pub fn has_system(&self) -> bool {
        self.blocks.iter().any(|b| matches!(b, Block::System(_)))
    }
}

/// DSL blocks describing an algebra: its field first when it has scalars.
pub fn algebra_blocks(h: &FiniteAlgebra) -> Vec<Block> {
    let sig = h.signature();
    let mut blocks = Vec::new();
    let mut flags = Vec::new();
    if let Some(p) = sig.product() {
        flags.push(Flag::Product(sig.ops()[p].name.clone()));
    }
    if let Some(block) = sig.scalars() {
        let f = &block.field;
        blocks.push(Block::Field(FieldDef {
            name: f.name().to_string(),
            p: f.characteristic(),
            k: f.degree(),
            add: IntArray::square(&f.add_table()),
            mul: IntArray::square(&f.mul_table()),
        }));
        flags.push(Flag::Scalars(f.name().to_string()));
    }
    let ops = sig
        .ops()
        .iter()
        .enumerate()
        .map(|(i, o)| OpDef {
            name: o.name.clone(),
            arity: o.arity,
            table: IntArray::from_flat(h.size(), o.arity, h.table(i)),
        })
        .collect();
    blocks.push(Block::Algebra(AlgebraDef {
        name: sanitize(h.name()),
        carrier: h.size(),
        ops,
        flags,
    }));
    blocks
}

/// An identifier usable as a block name.
fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if s.starts_with(|c: char| c.is_ascii_digit()) || s.is_empty() {
        format!("A{s}")
    } else {
        s
    }
}

/// DSL text of an algebra.
pub fn print_algebra(h: &FiniteAlgebra) -> String {
    print(&Document {
        spans: Vec::new(),
        blocks: algebra_blocks(h),
    })
}

/// DSL text of an equation system.
pub fn print_system(name: &str, system: &EquationSystem) -> String {
    print(&Document {
        spans: Vec::new(),
        blocks: vec![Block::System(SystemDef {
            name: sanitize(name),
            vars: system.vars.clone(),
            equations: system.pairs.clone(),
        })],
    })
}

/// DSL text of a quasi-identity.
pub fn print_quasi(name: &str, q: &QuasiIdentity) -> String {
    print(&Document {
        spans: Vec::new(),
        blocks: vec![Block::Quasi(QuasiDef {
            name: sanitize(name),
            vars: q.vars.clone(),
            premises: q.premises.clone(),
            conclusion: q.conclusion.clone(),
        })],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    const Z2: &str = "algebra Z2 { carrier 2 op add/2 table [[0,1],[1,0]] op neg/1 table [0,1] op zero/0 table [0] }";

    #[test]
    fn parses_z2() {
        let doc = parse(Z2).unwrap();
        assert_eq!(doc.algebra(None).unwrap(), zoo::cyclic_group(2));
        assert_eq!(doc.spans[0], Span { line: 1, column: 1 });
    }

    #[test]
    fn parses_system() {
        let doc = parse("system T over x { add(x,x) = zero }").unwrap();
        let s = doc.system(None).unwrap();
        assert_eq!(s.vars, vec!["x"]);
        assert_eq!(s.pairs.len(), 1);
        assert_eq!(s.pairs[0].1, Term::constant("zero"));
        assert_eq!(s.pairs[0].0, Term::app("add", vec![Term::var("x"), Term::var("x")]));
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let e = parse("algebra B { carrier 2 op add/2 table [[0,2],[1,0]] }").unwrap_err();
        assert!(e.to_string().contains("entry 2 out of range"), "{e}");
        assert!(matches!(e, Error::Parse { line: 1, column: 38, .. }), "{e:?}");
    }

    #[test]
    fn positioned_errors() {
        let e = parse("algebra A {\n  carrier 2\n  op f/1 table [0,1,1]\n}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse("system S over x { add(x,x) = }").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 30, .. }), "{e:?}");
        let e = parse(&format!("{Z2}\n{Z2}")).unwrap_err();
        assert!(e.to_string().contains("duplicate algebra `Z2`"));
        let e = parse("quasi Q over x { x = x }").unwrap_err();
        assert!(e.to_string().contains("=>"));
        assert!(parse("algebra A { carrier 2 op f/2 table [[0,1],[1,0]] op f/1 table [0,1] }").is_err());
        assert!(parse("algebra A { carrier 2 op f/1 table [0,1] product f }").is_err());
        assert!(parse("widget A {}").is_err());
        assert!(parse("algebra A { carrier 2 op c/0 table 0 }").is_err());
    }

    #[test]
    fn comments_and_whitespace() {
        let doc = parse("# two\nalgebra Z2 { # inline\n carrier 2\n op add/2 table [[0,1],\n [1,0]] op neg/1 table [0,1] op zero/0 table [0] }\n").unwrap();
        assert_eq!(doc, parse(Z2).unwrap());
    }

    #[test]
    fn quasi_blocks() {
        let doc = parse("quasi Q over x { add(x,x) = zero => x = zero }").unwrap();
        let q = doc.quasi(None).unwrap();
        assert_eq!(q.premises.len(), 1);
        assert_eq!(q.conclusion, (Term::var("x"), Term::constant("zero")));
        let doc = parse("quasi I over x,y { => add(x,y) = add(y,x) }").unwrap();
        assert!(doc.quasi(Some("I")).unwrap().premises.is_empty());
    }

    #[test]
    fn field_and_scalars() {
        let f4 = ScalarField::galois(2, 2).unwrap();
        let h = zoo::field_algebra(&f4);
        let text = print_algebra(&h);
        let doc = parse(&text).unwrap();
        assert_eq!(doc.algebra(None).unwrap(), h);
        assert_eq!(parse(&print(&doc)).unwrap(), doc);
        let missing = text.replace("  op scale_3/1 table [0,3,1,2]\n", "");
        assert!(missing.len() < text.len());
        let e = parse(&missing).unwrap().algebra(None).unwrap_err();
        assert!(e.to_string().contains("scale_3"), "{e}");
    }

    #[test]
    fn printer_roundtrip() {
        for h in [
            zoo::cyclic_group(4),
            zoo::left_zero_semigroup(2),
            zoo::transformation_monoid(),
            zoo::trivial_group(),
        ] {
            let doc = parse(&print_algebra(&h)).unwrap();
            assert_eq!(doc.algebra(None).unwrap(), h);
            assert_eq!(parse(&print(&doc)).unwrap(), doc);
        }
    }
}
