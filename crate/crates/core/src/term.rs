use std::fmt;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

/// A term over a signature: a variable, or a symbol applied to subterms.
/// Constants are applications with no arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    /// Depth of the syntax tree; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|t| t.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Rewrites every application bottom-up with `f(symbol, args)`.
    pub fn map_apps<F>(&self, f: &mut F) -> Term
    where
        F: FnMut(&str, Vec<Term>) -> Term,
    {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(s, args) => {
                let args = args.iter().map(|a| a.map_apps(f)).collect();
                f(s, args)
            }
        }
    }

    /// Value of the term in `algebra` under the assignment `point`.
    pub fn eval(&self, algebra: &FiniteAlgebra, point: &Point) -> Result<usize> {
        match self {
            Term::Var(v) => point.get(v).ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(s, args) => {
                let op = algebra.signature().op_index(s)?;
                let arity = algebra.signature().ops()[op].arity;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(a.eval(algebra, point)?);
                }
                Ok(algebra.apply(op, &vals))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An assignment of carrier elements to an ordered variable set; a point of
/// the affine space `Hom(W(X), H)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Point {
    pub vars: Vec<String>,
    pub values: Vec<usize>,
}

impl Point {
    pub fn new(vars: Vec<String>, values: Vec<usize>) -> Result<Point> {
        if vars.len() != values.len() {
            return Err(Error::DomainMismatch(format!(
                "{} variables but {} values",
                vars.len(),
                values.len()
            )));
        }
        Ok(Point { vars, values })
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var).map(|i| self.values[i])
    }

    /// The `index`-th point of `size^vars.len()` in lexicographic order, the
    /// first variable being the most significant digit.
    pub fn from_index(vars: &[String], size: usize, mut index: usize) -> Point {
        let mut values = vec![0; vars.len()];
        for slot in values.iter_mut().rev() {
            *slot = index % size;
            index /= size;
        }
        Point {
            vars: vars.to_vec(),
            values,
        }
    }

    pub fn index(&self, size: usize) -> usize {
        self.values.iter().fold(0, |acc, &v| acc * size + v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, a)) in self.vars.iter().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}={a}")?;
        }
        Ok(())
    }
}

/// Default variable names `x, y, z, u, v, w`, then `x6, x7, ...`.
pub fn var_names(k: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    (0..k)
        .map(|i| NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_depth() {
        let t = Term::app("add", vec![Term::var("x"), Term::app("neg", vec![Term::constant("zero")])]);
        assert_eq!(t.to_string(), "add(x,neg(zero))");
        assert_eq!(t.depth(), 2);
        assert_eq!(Term::constant("zero").depth(), 0);
        assert_eq!(t.variables(), vec!["x".to_string()]);
    }

    #[test]
    fn point_index_roundtrip() {
        let vars = vec!["x".to_string(), "y".to_string()];
        for i in 0..16 {
            let p = Point::from_index(&vars, 4, i);
            assert_eq!(p.index(4), i);
        }
        assert_eq!(Point::from_index(&vars, 4, 6).values, vec![1, 2]);
    }
}
