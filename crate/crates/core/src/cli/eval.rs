//! Expression evaluation.
//!
//! Subexpressions stay exact Laurent polynomials for as long as possible so
//! that literals like `t^40` or `1/u` never lose precision. A value becomes a
//! truncated series only when an operation needs one: `inv`, `comm`, division
//! by a non-monomial, a negative power of a non-monomial, or mixing with
//! another series.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{FieldValue, SkewContext};
use crate::grouplab::commutator;
use crate::skewseries::SkewLaurentSeries;

use super::parse::{Expr, Symbol};

#[derive(Clone, Debug)]
enum Val {
    /// Exact Laurent polynomial; no zero coefficients stored.
    Poly(BTreeMap<i64, FieldValue>),
    Series(SkewLaurentSeries),
}

struct Evaluator<'a> {
    ctx: &'a Arc<SkewContext>,
    prec: i64,
}

fn poly_monomial(c: FieldValue, k: i64) -> Val {
    let mut m = BTreeMap::new();
    if !c.is_zero() {
        m.insert(k, c);
    }
    Val::Poly(m)
}

fn poly_valuation(p: &BTreeMap<i64, FieldValue>) -> Option<i64> {
    p.keys().next().copied()
}

fn series_lead(s: &SkewLaurentSeries) -> i64 {
    s.valuation().finite().unwrap_or(s.precision())
}

impl<'a> Evaluator<'a> {
    fn poly_to_series(&self, p: &BTreeMap<i64, FieldValue>, prec: i64) -> SkewLaurentSeries {
        let terms: Vec<(i64, FieldValue)> = p
            .iter()
            .filter(|(k, _)| **k < prec)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        SkewLaurentSeries::from_terms(self.ctx, &terms, prec).expect("terms are valid")
    }

    fn to_series(&self, v: Val) -> SkewLaurentSeries {
        match v {
            Val::Poly(p) => self.poly_to_series(&p, self.prec),
            Val::Series(s) => s,
        }
    }

    fn add(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Poly(mut x), Val::Poly(y)) => {
                for (k, c) in y {
                    let sum = match x.remove(&k) {
                        Some(d) => d.add(&c),
                        None => c,
                    };
                    if !sum.is_zero() {
                        x.insert(k, sum);
                    }
                }
                Ok(Val::Poly(x))
            }
            (Val::Poly(p), Val::Series(s)) | (Val::Series(s), Val::Poly(p)) => {
                let q = self.poly_to_series(&p, s.precision());
                Ok(Val::Series(q.add(&s)?))
            }
            (Val::Series(x), Val::Series(y)) => Ok(Val::Series(x.add(&y)?)),
        }
    }

    fn neg(&self, a: Val) -> Val {
        match a {
            Val::Poly(p) => Val::Poly(p.into_iter().map(|(k, c)| (k, c.neg())).collect()),
            Val::Series(s) => Val::Series(s.negate()),
        }
    }

    fn mul(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Poly(x), Val::Poly(y)) => {
                let mut out: BTreeMap<i64, FieldValue> = BTreeMap::new();
                for (i, a) in &x {
                    for (j, b) in &y {
                        let term = a.mul(&self.ctx.apply_power(*i, b));
                        let k = i + j;
                        let sum = match out.remove(&k) {
                            Some(d) => d.add(&term),
                            None => term,
                        };
                        if !sum.is_zero() {
                            out.insert(k, sum);
                        }
                    }
                }
                Ok(Val::Poly(out))
            }
            // An exact factor is lifted to a precision high enough that the
            // series operand alone limits the product precision.
            (Val::Poly(p), Val::Series(s)) => {
                let Some(vp) = poly_valuation(&p) else {
                    return Ok(Val::Poly(p));
                };
                let q = s.precision() + vp - series_lead(&s);
                let lifted = self.poly_to_series(&p, q.max(vp + 1));
                Ok(Val::Series(lifted.mul(&s)?))
            }
            (Val::Series(s), Val::Poly(p)) => {
                let Some(vp) = poly_valuation(&p) else {
                    return Ok(Val::Poly(p));
                };
                let q = s.precision() + vp - series_lead(&s);
                let lifted = self.poly_to_series(&p, q.max(vp + 1));
                Ok(Val::Series(s.mul(&lifted)?))
            }
            (Val::Series(x), Val::Series(y)) => Ok(Val::Series(x.mul(&y)?)),
        }
    }

    /// Two-sided inverse; exact for monomials `c*t^k`.
    fn inverse(&self, a: Val) -> Result<Val> {
        if let Val::Poly(p) = &a {
            if p.is_empty() {
                return Err(Error::domain("division by zero"));
            }
            if p.len() == 1 {
                let (&k, c) = p.iter().next().unwrap();
                let ci = c.inv().expect("nonzero coefficient");
                return Ok(poly_monomial(self.ctx.apply_power(-k, &ci), -k));
            }
        }
        Ok(Val::Series(self.to_series(a).inverse()?))
    }

    fn pow(&self, a: Val, e: i64) -> Result<Val> {
        if e < 0 {
            let inv = self.inverse(a)?;
            return self.pow(inv, e.checked_neg().ok_or_else(|| Error::usage("exponent out of range"))?);
        }
        let mut acc = poly_monomial(self.ctx.one(), 0);
        let mut base = a;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base.clone())?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base.clone(), base)?;
            }
        }
        Ok(acc)
    }

    fn symbol(&self, s: Symbol) -> Result<Val> {
        match s {
            Symbol::T => Ok(poly_monomial(self.ctx.one(), 1)),
            Symbol::U | Symbol::W => {
                if self.ctx.generator_name() == Some(s.name()) {
                    Ok(poly_monomial(self.ctx.generator().unwrap(), 0))
                } else {
                    Err(Error::usage(format!(
                        "symbol {} is not defined over {}",
                        s.name(),
                        self.ctx.field().describe()
                    )))
                }
            }
        }
    }

    fn eval(&self, e: &Expr) -> Result<Val> {
        match e {
            Expr::Int(n) => Ok(poly_monomial(self.ctx.from_bigint(n), 0)),
            Expr::Sym(s) => self.symbol(*s),
            Expr::Neg(a) => Ok(self.neg(self.eval(a)?)),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?),
            Expr::Sub(a, b) => {
                let rhs = self.neg(self.eval(b)?);
                self.add(self.eval(a)?, rhs)
            }
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?),
            Expr::Div(a, b) => {
                let lhs = self.eval(a)?;
                let rhs = self.inverse(self.eval(b)?)?;
                self.mul(lhs, rhs)
            }
            Expr::Pow(a, k) => self.pow(self.eval(a)?, *k),
            Expr::Inv(a) => {
                let s = self.to_series(self.eval(a)?);
                Ok(Val::Series(s.inverse()?))
            }
            Expr::Comm(a, b) => {
                let x = self.to_series(self.eval(a)?);
                let y = self.to_series(self.eval(b)?);
                Ok(Val::Series(commutator(&x, &y)?.value))
            }
            Expr::Truncated(..) => Err(Error::usage("O(t^P) is only allowed at top level")),
        }
    }
}

/// Evaluates `expr` in `ctx`. Exact parts are truncated at `prec`, or at the
/// `O(t^P)` marker when the expression carries one.
pub fn eval(expr: &Expr, ctx: &Arc<SkewContext>, prec: i64) -> Result<SkewLaurentSeries> {
    let (body, prec) = match expr {
        Expr::Truncated(body, p) => (body.as_ref(), *p),
        other => (other, prec),
    };
    let ev = Evaluator { ctx, prec };
    let s = ev.to_series(ev.eval(body)?);
    if s.precision() > prec {
        s.truncate(prec)
    } else {
        Ok(s)
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str, ctx: &Arc<SkewContext>, prec: i64) -> Result<SkewLaurentSeries> {
    eval(&super::parse::parse_expr(text)?, ctx, prec)
}
