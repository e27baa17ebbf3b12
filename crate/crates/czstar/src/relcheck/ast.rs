//! Syntax tree of a relation and its canonical printer.
//!
//! The printer emits the fewest parentheses that reparse to the same tree,
//! so `parse(print(parse(t))) == parse(t)` for every accepted `t`.

use std::fmt;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub};

use crate::error::{Error, Result};

/// Integer-valued index expression; `/2` makes halves (and quarters, if nested).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IExpr {
    Int(i64),
    Var(String),
    Neg(Box<IExpr>),
    Add(Box<IExpr>, Box<IExpr>),
    Sub(Box<IExpr>, Box<IExpr>),
    Mul(Box<IExpr>, Box<IExpr>),
    Half(Box<IExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketKind {
    /// `_(x)`: q^x AB - q^{-x} BA.
    Deformed(IExpr),
    /// `_(x,y)`: q^x AB - q^y BA.
    Pair(IExpr, IExpr),
    /// `_*`: A*B - B*A with the weighted product.
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    QPow(IExpr),
    QBracket(IExpr),
    Op { name: String, args: Vec<IExpr> },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Bracket {
        left: Box<Expr>,
        right: Box<Expr>,
        kind: BracketKind,
    },
}

/// `var in lo..hi`, both ends inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub var: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Expr,
    pub rhs: Expr,
    pub bindings: Vec<Binding>,
}

fn overflow() -> Error {
    Error::Config("integer overflow in index expression".into())
}

impl IExpr {
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<Rational64>) -> Result<Rational64> {
        Ok(match self {
            IExpr::Int(k) => Rational64::from_integer(*k),
            IExpr::Var(v) => env(v).ok_or_else(|| Error::UnknownName(v.clone()))?,
            IExpr::Neg(e) => Rational64::from_integer(0)
                .checked_sub(&e.eval(env)?)
                .ok_or_else(overflow)?,
            IExpr::Add(a, b) => a.eval(env)?.checked_add(&b.eval(env)?).ok_or_else(overflow)?,
            IExpr::Sub(a, b) => a.eval(env)?.checked_sub(&b.eval(env)?).ok_or_else(overflow)?,
            IExpr::Mul(a, b) => a.eval(env)?.checked_mul(&b.eval(env)?).ok_or_else(overflow)?,
            IExpr::Half(e) => e.eval(env)? / 2,
        })
    }

    fn vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            IExpr::Int(_) => {}
            IExpr::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            IExpr::Neg(e) | IExpr::Half(e) => e.vars(out),
            IExpr::Add(a, b) | IExpr::Sub(a, b) | IExpr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    /// `self + k`, used by the mutation rule.
    pub fn plus(self, k: i64) -> IExpr {
        IExpr::Add(Box::new(self), Box::new(IExpr::Int(k)))
    }

    fn prec(&self) -> u8 {
        match self {
            IExpr::Add(..) | IExpr::Sub(..) => 1,
            IExpr::Mul(..) | IExpr::Half(..) => 2,
            IExpr::Neg(_) => 3,
            IExpr::Int(k) if *k < 0 => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            IExpr::Int(k) => write!(f, "{k}")?,
            IExpr::Var(v) => f.write_str(v)?,
            IExpr::Neg(e) => {
                f.write_str("-")?;
                e.write(f, 3)?;
            }
            IExpr::Add(a, b) | IExpr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, IExpr::Add(..)) { "+" } else { "-" })?;
                b.write(f, 2)?;
            }
            IExpr::Mul(a, b) => {
                a.write(f, 2)?;
                f.write_str("*")?;
                b.write(f, 3)?;
            }
            IExpr::Half(e) => {
                e.write(f, 2)?;
                f.write_str("/2")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for IExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 1)
    }
}

impl Expr {
    pub fn vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::QPow(e) | Expr::QBracket(e) => e.vars(out),
            Expr::Op { args, .. } => args.iter().for_each(|a| a.vars(out)),
            Expr::Neg(e) => e.vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Bracket { left, right, kind } => {
                left.vars(out);
                right.vars(out);
                match kind {
                    BracketKind::Deformed(x) => x.vars(out),
                    BracketKind::Pair(x, y) => {
                        x.vars(out);
                        y.vars(out);
                    }
                    BracketKind::Star => {}
                }
            }
        }
    }

    pub fn has_bracket(&self) -> bool {
        match self {
            Expr::Bracket { .. } => true,
            Expr::Neg(e) => e.has_bracket(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_bracket() || b.has_bracket(),
            _ => false,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Int(k) if *k < 0 => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Int(k) => write!(f, "{k}")?,
            Expr::QPow(e) => write!(f, "q^({e})")?,
            Expr::QBracket(e) => write!(f, "qb({e})")?,
            Expr::Op { name, args } => {
                write!(f, "{name}{{")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")?;
            }
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.write(f, 2)?;
                f.write_str("*")?;
                b.write(f, 3)?;
            }
            Expr::Bracket { left, right, kind } => {
                f.write_str("[")?;
                left.write(f, 1)?;
                f.write_str(",")?;
                right.write(f, 1)?;
                match kind {
                    BracketKind::Deformed(x) => write!(f, "]_({x})")?,
                    BracketKind::Pair(x, y) => write!(f, "]_({x},{y})")?,
                    BracketKind::Star => f.write_str("]_*")?,
                }
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 1)
    }
}

impl Relation {
    /// Variables in order of first appearance, left side first.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.lhs.vars(&mut out);
        self.rhs.vars(&mut out);
        for b in &self.bindings {
            if !out.contains(&b.var.as_str()) {
                out.push(&b.var);
            }
        }
        out
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {}", self.lhs, self.rhs)?;
        for (i, b) in self.bindings.iter().enumerate() {
            f.write_str(if i == 0 { " for " } else { ", " })?;
            write!(f, "{} in {}..{}", b.var, b.lo, b.hi)?;
        }
        Ok(())
    }
}
