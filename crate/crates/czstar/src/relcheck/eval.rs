//! Evaluation of relations against an operator registry.

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde_json::{Map, Value as Json};

use crate::czrep::star_exponent;
use crate::error::{Error, Result};
use crate::phase::{HalfInt, Phase};
use crate::report::Report;

use super::ast::{BracketKind, Expr, IExpr, Relation};

/// Mode and weight carried by a registry operator for the star product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Meta {
    pub mode: i64,
    pub weight: HalfInt,
}

impl Meta {
    pub fn new(mode: i64, weight: i64) -> Self {
        Self {
            mode,
            weight: HalfInt::int(weight),
        }
    }
}

/// An operator algebra the DSL can be evaluated in.
pub trait Realization: Sync {
    type Op: Clone + Send;

    /// Deformation parameter used by `q^(x)`, `qb(x)` and the brackets.
    fn q(&self) -> Phase;
    /// Dimension reported in the JSON output.
    fn size(&self) -> usize;
    fn lookup(&self, name: &str, args: &[Rational64]) -> Result<(Self::Op, Option<Meta>)>;
    /// Named integer constants usable inside index expressions.
    fn constant(&self, _name: &str) -> Option<Rational64> {
        None
    }
    fn identity(&self) -> Self::Op;
    fn add(&self, a: &Self::Op, b: &Self::Op) -> Result<Self::Op>;
    fn mul(&self, a: &Self::Op, b: &Self::Op) -> Result<Self::Op>;
    fn scale(&self, a: &Self::Op, c: Complex64) -> Self::Op;
    /// max|a - b| / max(1, max|a|, max|b|).
    fn residual(&self, a: &Self::Op, b: &Self::Op) -> Result<f64>;
}

#[derive(Clone, Debug)]
pub enum Value<O> {
    Scalar(Complex64),
    Op(O, Option<Meta>),
}

/// Integer argument of a registry operator.
pub fn int_arg(name: &str, args: &[Rational64], i: usize) -> Result<i64> {
    let a = args
        .get(i)
        .ok_or_else(|| Error::Config(format!("`{name}` needs at least {} argument(s)", i + 1)))?;
    if !a.is_integer() {
        return Err(Error::Config(format!("`{name}` argument {a} is not an integer")));
    }
    Ok(a.to_integer())
}

pub fn arity(name: &str, args: &[Rational64], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(Error::Config(format!("`{name}` takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

struct Ctx<'a, R: Realization> {
    r: &'a R,
    env: &'a [(String, i64)],
}

impl<R: Realization> Ctx<'_, R> {
    fn index(&self, e: &IExpr) -> Result<Rational64> {
        e.eval(&|v| {
            self.env
                .iter()
                .find(|(n, _)| n == v)
                .map(|(_, x)| Rational64::from_integer(*x))
                .or_else(|| self.r.constant(v))
        })
    }

    fn qpow(&self, x: Rational64) -> Result<Complex64> {
        Ok(self.r.q().pow_rational(x)?.to_complex())
    }

    fn as_op(&self, v: Value<R::Op>) -> R::Op {
        match v {
            Value::Scalar(c) => self.r.scale(&self.r.identity(), c),
            Value::Op(o, _) => o,
        }
    }

    fn add(&self, a: Value<R::Op>, b: Value<R::Op>) -> Result<Value<R::Op>> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
            (Value::Op(x, ma), Value::Op(y, mb)) => {
                let meta = if ma == mb { ma } else { None };
                Value::Op(self.r.add(&x, &y)?, meta)
            }
            (a, b) => Value::Op(self.r.add(&self.as_op(a), &self.as_op(b))?, None),
        })
    }

    fn scale(&self, v: Value<R::Op>, c: Complex64) -> Value<R::Op> {
        match v {
            Value::Scalar(x) => Value::Scalar(x * c),
            Value::Op(o, m) => Value::Op(self.r.scale(&o, c), m),
        }
    }

    fn mul(&self, a: &Value<R::Op>, b: &Value<R::Op>) -> Result<Value<R::Op>> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Scalar(x), Value::Op(o, m)) | (Value::Op(o, m), Value::Scalar(x)) => {
                Value::Op(self.r.scale(o, *x), *m)
            }
            (Value::Op(x, ma), Value::Op(y, mb)) => {
                let meta = match (ma, mb) {
                    (Some(p), Some(q)) => Some(Meta {
                        mode: p.mode + q.mode,
                        weight: p.weight + q.weight,
                    }),
                    _ => None,
                };
                Value::Op(self.r.mul(x, y)?, meta)
            }
        })
    }

    fn meta_of(&self, v: &Value<R::Op>, e: &Expr) -> Result<Meta> {
        match v {
            Value::Scalar(_) => Ok(Meta::new(0, 0)),
            Value::Op(_, Some(m)) => Ok(*m),
            Value::Op(_, None) => Err(Error::MissingWeight(e.to_string())),
        }
    }

    fn bracket(&self, l: &Expr, r: &Expr, kind: &BracketKind) -> Result<Value<R::Op>> {
        let a = self.eval(l)?;
        let b = self.eval(r)?;
        let (x, y, meta) = match kind {
            BracketKind::Deformed(x) => {
                let x = self.index(x)?;
                (x, -x, None)
            }
            BracketKind::Pair(x, y) => (self.index(x)?, self.index(y)?, None),
            BracketKind::Star => {
                let ma = self.meta_of(&a, l)?;
                let mb = self.meta_of(&b, r)?;
                let xab = star_exponent(ma.mode, ma.weight, mb.mode, mb.weight);
                // B*A carries q^{+x}
                (-xab, xab, Some((ma, mb)))
            }
        };
        let ab = self.scale(self.mul(&a, &b)?, self.qpow(x)?);
        let ba = self.scale(self.mul(&b, &a)?, -self.qpow(y)?);
        let sum = self.add(ab, ba)?;
        // a bracket inherits mode n+m and the common weight, as a generator would
        let meta = match (meta, &a, &b) {
            (Some((p, q)), ..) => bracket_meta(p, q),
            (None, Value::Op(_, Some(p)), Value::Op(_, Some(q))) => bracket_meta(*p, *q),
            _ => None,
        };
        Ok(match sum {
            Value::Op(o, _) => Value::Op(o, meta),
            s => s,
        })
    }

    fn eval(&self, e: &Expr) -> Result<Value<R::Op>> {
        match e {
            Expr::Int(k) => Ok(Value::Scalar(Complex64::new(*k as f64, 0.0))),
            Expr::QPow(x) => Ok(Value::Scalar(self.qpow(self.index(x)?)?)),
            Expr::QBracket(x) => {
                let x = self.index(x)?;
                let q = self.r.q();
                let d = q.to_complex() - q.inv().to_complex();
                if d.norm() < 1e-14 {
                    return Err(Error::DegenerateQ);
                }
                Ok(Value::Scalar((self.qpow(x)? - self.qpow(-x)?) / d))
            }
            Expr::Op { name, args } => {
                let args = args.iter().map(|a| self.index(a)).collect::<Result<Vec<_>>>()?;
                let (op, meta) = self.r.lookup(name, &args)?;
                Ok(Value::Op(op, meta))
            }
            Expr::Neg(x) => Ok(self.scale(self.eval(x)?, Complex64::new(-1.0, 0.0))),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?),
            Expr::Sub(a, b) => {
                let nb = self.scale(self.eval(b)?, Complex64::new(-1.0, 0.0));
                self.add(self.eval(a)?, nb)
            }
            Expr::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?),
            Expr::Bracket { left, right, kind } => self.bracket(left, right, kind),
        }
    }
}

fn bracket_meta(p: Meta, q: Meta) -> Option<Meta> {
    (p.weight == q.weight).then_some(Meta {
        mode: p.mode + q.mode,
        weight: p.weight,
    })
}

/// Evaluate one side of a relation under a binding.
pub fn evaluate<R: Realization>(r: &R, e: &Expr, env: &[(String, i64)]) -> Result<Value<R::Op>> {
    Ctx { r, env }.eval(e)
}

/// Residual of one relation under one binding.
pub fn relation_residual<R: Realization>(r: &R, rel: &Relation, env: &[(String, i64)]) -> Result<f64> {
    let ctx = Ctx { r, env };
    let lhs = ctx.eval(&rel.lhs)?;
    let rhs = ctx.eval(&rel.rhs)?;
    match (lhs, rhs) {
        (Value::Scalar(a), Value::Scalar(b)) => Ok((a - b).norm() / 1f64.max(a.norm()).max(b.norm())),
        (a, b) => r.residual(&ctx.as_op(a), &ctx.as_op(b)),
    }
}

/// All variable assignments in deterministic (lexicographic) order.
///
/// Variables without an explicit range get `default`; realization constants are skipped.
pub fn bindings<R: Realization>(r: &R, rel: &Relation, default: (i64, i64)) -> Vec<Vec<(String, i64)>> {
    let mut ranges: Vec<(String, i64, i64)> = Vec::new();
    for b in &rel.bindings {
        ranges.push((b.var.clone(), b.lo, b.hi));
    }
    for v in rel.vars() {
        if !ranges.iter().any(|(n, ..)| n == v) && r.constant(v).is_none() {
            ranges.push((v.to_string(), default.0, default.1));
        }
    }
    let mut out = vec![Vec::new()];
    for (name, lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|env: Vec<(String, i64)>| {
                let name = name.clone();
                (lo..=hi).map(move |x| {
                    let mut e = env.clone();
                    e.push((name.clone(), x));
                    e
                })
            })
            .collect();
    }
    out
}

fn env_json(env: &[(String, i64)]) -> Json {
    let mut m = Map::new();
    for (k, v) in env {
        m.insert(k.clone(), Json::from(*v));
    }
    Json::Object(m)
}

fn env_label(env: &[(String, i64)]) -> String {
    let parts: Vec<String> = env.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Evaluate every relation over its bindings; one check per binding.
pub fn check_relations<R: Realization>(
    r: &R,
    suite: &str,
    relations: &[Relation],
    tol: f64,
    default_range: (i64, i64),
) -> Result<Report> {
    let mut rep = Report::new(suite, r.size(), r.q());
    for rel in relations {
        let name = rel.to_string();
        let envs = bindings(r, rel, default_range);
        let results: Vec<Result<f64>> = envs
            .par_iter()
            .map(|env| {
                relation_residual(r, rel, env).map_err(|e| Error::Evaluation {
                    binding: format!("{name} at {}", env_label(env)),
                    source: Box::new(e),
                })
            })
            .collect();
        for (env, res) in envs.iter().zip(results) {
            rep.push(name.clone(), env_json(env), res?, tol);
        }
    }
    Ok(rep)
}
