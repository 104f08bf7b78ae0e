//! Truncated twisted Laurent series: elements of `D = L((t, sigma))`.
//!
//! A series is `sum_{i >= n} a_i t^i + O(t^P)` with coefficients in `L`
//! and multiplication twisted by `t * a = sigma(a) * t`:
//!
//! ```text
//! (sum a_i t^i)(sum b_j t^j) = sum_r ( sum_{i+j=r} a_i sigma^i(b_j) ) t^r
//! ```
//!
//! Precision is absolute: a series knows every coefficient below `t^P`.
//! The zero-at-precision value is its own state (no lead exponent), since
//! the valuation is undefined at zero.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{FieldValue, SkewContext};

pub const DEFAULT_PRECISION: i64 = 32;

/// Absolute precision `P`: coefficients of `t^k` for `k < P` are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Precision(pub i64);

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

impl From<i64> for Precision {
    fn from(p: i64) -> Self {
        Precision(p)
    }
}

/// Result of the valuation map: the lead exponent, or the marker for a
/// series that is zero at its precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Finite(i64),
    Zero,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(n) => Some(n),
            Valuation::Zero => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(n) => write!(f, "{n}"),
            Valuation::Zero => write!(f, "ZERO"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewLaurentSeries {
    ctx: Arc<SkewContext>,
    /// `None` is the zero-at-precision series.
    lead: Option<i64>,
    /// `a_lead, ..., a_{prec-1}`; `coeffs[0]` is nonzero.
    coeffs: Vec<FieldValue>,
    prec: i64,
}

impl SkewLaurentSeries {
    /// Builds from `(exponent, coefficient)` pairs. Exponents must be
    /// distinct and below `prec`; zero coefficients are dropped.
    pub fn from_terms(
        ctx: &Arc<SkewContext>,
        terms: &[(i64, FieldValue)],
        prec: impl Into<Precision>,
    ) -> Result<Self> {
        let prec = prec.into().0;
        let mut sorted: Vec<&(i64, FieldValue)> = terms.iter().collect();
        sorted.sort_by_key(|(e, _)| *e);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::usage(format!("exponent {} given twice", w[0].0)));
            }
        }
        for (e, c) in &sorted {
            if *e >= prec {
                return Err(Error::usage(format!(
                    "exponent {e} is not below the precision {prec}"
                )));
            }
            ctx.check_value(c)?;
        }
        let nonzero: Vec<&(i64, FieldValue)> =
            sorted.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some(&&(start, _)) = nonzero.first() else {
            return Ok(Self::zero(ctx, prec));
        };
        let mut coeffs = vec![ctx.zero(); (prec - start) as usize];
        for (e, c) in nonzero {
            coeffs[(e - start) as usize] = c.clone();
        }
        Ok(Self::from_dense(ctx.clone(), start, coeffs, prec))
    }

    /// Normalizes a dense coefficient run starting at exponent `start`.
    pub(crate) fn from_dense(
        ctx: Arc<SkewContext>,
        start: i64,
        mut coeffs: Vec<FieldValue>,
        prec: i64,
    ) -> Self {
        let keep = (prec - start).max(0) as usize;
        coeffs.truncate(keep);
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => Self::zero(&ctx, prec),
            Some(k) => {
                coeffs.drain(..k);
                SkewLaurentSeries {
                    ctx,
                    lead: Some(start + k as i64),
                    coeffs,
                    prec,
                }
            }
        }
    }

    pub fn zero(ctx: &Arc<SkewContext>, prec: impl Into<Precision>) -> Self {
        SkewLaurentSeries {
            ctx: ctx.clone(),
            lead: None,
            coeffs: Vec::new(),
            prec: prec.into().0,
        }
    }

    /// `c * t^k + O(t^prec)`; zero if `k >= prec` or `c = 0`.
    pub fn monomial(ctx: &Arc<SkewContext>, c: FieldValue, k: i64, prec: impl Into<Precision>) -> Self {
        let prec = prec.into().0;
        if k >= prec {
            return Self::zero(ctx, prec);
        }
        let mut coeffs = vec![ctx.zero(); (prec - k) as usize];
        coeffs[0] = c;
        Self::from_dense(ctx.clone(), k, coeffs, prec)
    }

    pub fn constant(ctx: &Arc<SkewContext>, c: FieldValue, prec: impl Into<Precision>) -> Self {
        Self::monomial(ctx, c, 0, prec)
    }

    pub fn one(ctx: &Arc<SkewContext>, prec: impl Into<Precision>) -> Self {
        Self::constant(ctx, ctx.one(), prec)
    }

    /// The variable `t`.
    pub fn t(ctx: &Arc<SkewContext>, prec: impl Into<Precision>) -> Self {
        Self::monomial(ctx, ctx.one(), 1, prec)
    }

    pub fn context(&self) -> &Arc<SkewContext> {
        &self.ctx
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.lead.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match self.lead {
            Some(n) => Valuation::Finite(n),
            None => Valuation::Zero,
        }
    }

    /// Lead exponent, with the precision standing in for zero. This is the
    /// quantity that enters precision propagation.
    fn effective_lead(&self) -> i64 {
        self.lead.unwrap_or(self.prec)
    }

    pub fn leading_coeff(&self) -> Result<&FieldValue> {
        self.coeffs
            .first()
            .ok_or_else(|| Error::domain("leading coefficient of the zero series"))
    }

    /// Coefficient of `t^k`, or `None` when `k` is beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<FieldValue> {
        if k >= self.prec {
            return None;
        }
        match self.lead {
            Some(n) if k >= n => Some(self.coeffs[(k - n) as usize].clone()),
            _ => Some(self.ctx.zero()),
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldValue)> {
        let n = self.lead.unwrap_or(0);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (n + k as i64, c))
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::usage("series belong to different skew contexts"))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let prec = self.prec.min(other.prec);
        let start = self.effective_lead().min(other.effective_lead());
        if start >= prec {
            return Ok(Self::zero(&self.ctx, prec));
        }
        let mut out = Vec::with_capacity((prec - start) as usize);
        for k in start..prec {
            let a = self.coeff_ref(k);
            let b = other.coeff_ref(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => self.ctx.zero(),
            });
        }
        Ok(Self::from_dense(self.ctx.clone(), start, out, prec))
    }

    /// Stored coefficient at `k`, `None` when it is an implicit zero.
    fn coeff_ref(&self, k: i64) -> Option<&FieldValue> {
        let n = self.lead?;
        if k < n {
            return None;
        }
        self.coeffs.get((k - n) as usize)
    }

    pub fn negate(&self) -> Self {
        SkewLaurentSeries {
            ctx: self.ctx.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    /// `c * self` for a constant `c` of `L` (left multiplication, so no twist).
    pub fn scale_left(&self, c: &FieldValue) -> Result<Self> {
        self.ctx.check_value(c)?;
        if c.is_zero() {
            return Ok(Self::zero(&self.ctx, self.prec));
        }
        Ok(SkewLaurentSeries {
            ctx: self.ctx.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|a| c.mul(a)).collect(),
            prec: self.prec,
        })
    }

    /// Result precision of a product: `min(P_x + v(y), P_y + v(x))`.
    fn product_precision(&self, other: &Self) -> i64 {
        (self.prec + other.effective_lead()).min(other.prec + self.effective_lead())
    }

    /// Twisted product; every `sigma^i(b_j)` is evaluated by closed form.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let prec = self.product_precision(other);
        let (Some(vx), Some(vy)) = (self.lead, other.lead) else {
            return Ok(Self::zero(&self.ctx, prec));
        };
        let start = vx + vy;
        let len = (prec - start) as usize;
        let mut out = vec![self.ctx.zero(); len];
        for (ii, a) in self.coeffs.iter().enumerate() {
            if ii >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            let i = vx + ii as i64;
            for (jj, b) in other.coeffs.iter().enumerate().take(len - ii) {
                if b.is_zero() {
                    continue;
                }
                let term = a.mul(&self.ctx.apply_power(i, b));
                out[ii + jj] = out[ii + jj].add(&term);
            }
        }
        Ok(Self::from_dense(self.ctx.clone(), start, out, prec))
    }

    /// Same product as [`mul`](Self::mul), but row `i+1` of twisted right
    /// coefficients is obtained by applying `sigma` once to row `i`.
    pub fn mul_incremental(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let prec = self.product_precision(other);
        let (Some(vx), Some(vy)) = (self.lead, other.lead) else {
            return Ok(Self::zero(&self.ctx, prec));
        };
        let start = vx + vy;
        let len = (prec - start) as usize;
        let mut out = vec![self.ctx.zero(); len];
        let width = other.coeffs.len().min(len);
        let mut row: Vec<FieldValue> = other.coeffs[..width]
            .iter()
            .map(|b| self.ctx.apply_power(vx, b))
            .collect();
        for (ii, a) in self.coeffs.iter().enumerate() {
            if ii >= len {
                break;
            }
            if ii > 0 {
                row.truncate(len - ii);
                for b in row.iter_mut() {
                    if !b.is_zero() {
                        *b = self.ctx.apply_power(1, b);
                    }
                }
            }
            if a.is_zero() {
                continue;
            }
            for (jj, b) in row.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = a.mul(b);
                out[ii + jj] = out[ii + jj].add(&term);
            }
        }
        Ok(Self::from_dense(self.ctx.clone(), start, out, prec))
    }

    /// Two-sided inverse by coefficient recursion.
    ///
    /// For `x = a_n t^n + ...` the inverse starts with `sigma^{-n}(a_n^{-1}) t^{-n}`
    /// and is known to absolute precision `P - 2n`.
    pub fn inverse(&self) -> Result<Self> {
        let Some(n) = self.lead else {
            return Err(Error::domain("inverse of the zero series"));
        };
        let ctx = &self.ctx;
        let out_prec = self.prec - 2 * n;
        let count = (self.prec - n) as usize;
        let lead_inv = self.coeffs[0]
            .inv()
            .expect("leading coefficient is nonzero");
        // b_{m-n} = sigma^{-n}( -a_n^{-1} * sum_{i=n+1}^{n+m} a_i sigma^i(b_{m-i}) )
        let mut b: Vec<FieldValue> = Vec::with_capacity(count);
        b.push(ctx.apply_power(-n, &lead_inv));
        let neg_lead_inv = lead_inv.neg();
        for m in 1..count {
            let mut acc = ctx.zero();
            for (ii, a) in self.coeffs.iter().enumerate().take(m + 1).skip(1) {
                if a.is_zero() {
                    continue;
                }
                let bj = &b[m - ii];
                if bj.is_zero() {
                    continue;
                }
                let i = n + ii as i64;
                acc = acc.add(&a.mul(&ctx.apply_power(i, bj)));
            }
            let next = if acc.is_zero() {
                acc
            } else {
                ctx.apply_power(-n, &neg_lead_inv.mul(&acc))
            };
            b.push(next);
        }
        Ok(Self::from_dense(ctx.clone(), -n, b, out_prec))
    }

    /// `k`-fold product; negative `k` goes through the inverse.
    pub fn power(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.power(-k);
        }
        if k == 0 {
            return Ok(Self::one(&self.ctx, self.prec));
        }
        let mut base = self.clone();
        let mut e = k as u64;
        let mut acc: Option<Self> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.unwrap())
    }

    /// Drops every term at exponent `>= new_prec`.
    pub fn truncate(&self, new_prec: i64) -> Result<Self> {
        if new_prec > self.prec {
            return Err(Error::usage(format!(
                "cannot raise precision from {} to {new_prec}",
                self.prec
            )));
        }
        Ok(match self.lead {
            None => Self::zero(&self.ctx, new_prec),
            Some(n) => Self::from_dense(self.ctx.clone(), n, self.coeffs.clone(), new_prec),
        })
    }

    /// Agreement of all coefficients below `min(P_x, P_y)`.
    pub fn equals_to_precision(&self, other: &Self) -> bool {
        if self.check_context(other).is_err() {
            return false;
        }
        let prec = self.prec.min(other.prec);
        let start = self.effective_lead().min(other.effective_lead());
        (start..prec).all(|k| match (self.coeff_ref(k), other.coeff_ref(k)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }

    /// Largest coefficient size in bits (diagnostics).
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bit_size()).max().unwrap_or(0)
    }
}

fn needs_parens(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

/// Renders `c*t^k` terms joined by ` + ` / ` - `, then `O(t^P)`, e.g.
/// `3*t^-2 + (u+1)/u*t^0 + O(t^32)`.
impl fmt::Display for SkewLaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.terms() {
            let mut cs = c.to_string();
            if needs_parens(&cs) {
                cs = format!("({cs})");
            }
            let power = match k {
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let term = if cs == "1" && k != 0 {
                power
            } else if cs == "-1" && k != 0 {
                format!("-{power}")
            } else {
                format!("{cs}*{power}")
            };
            if out.is_empty() {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            write!(f, "O(t^{})", self.prec)
        } else {
            write!(f, "{out} + O(t^{})", self.prec)
        }
    }
}
