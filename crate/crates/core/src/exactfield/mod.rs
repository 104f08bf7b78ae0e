//! Exact coefficient fields `L`, automorphisms `sigma` of `L`, and the skew
//! context `(L, sigma)` that every series is built over.
//!
//! Three fields are supported: `Q` itself, the rational function field
//! `Q(u)`, and Galois fields `F_{p^k}` with an explicit modulus. Values
//! of all three live in the tagged [`FieldValue`]; mixing tags is a usage
//! error on the checked entry points ([`field_add`], [`field_mul`], ...).

mod automorphism;
mod galois;
pub(crate) mod modp;
mod qpoly;
mod ratfunc;
mod zpoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use automorphism::{AutOrder, Automorphism};
pub use galois::{GaloisField, GaloisFieldElement};
pub use qpoly::UniPolynomial;
pub use ratfunc::RationalFunction;
pub use zpoly::ZPoly;

/// Which field `L` a context works over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `Q`
    Rationals,
    /// `Q(u)`
    RationalFunctions,
    /// `F_{p^k}`
    Galois(Arc<GaloisField>),
}

impl FieldKind {
    pub fn galois(field: GaloisField) -> Self {
        FieldKind::Galois(Arc::new(field))
    }

    pub fn describe(&self) -> String {
        match self {
            FieldKind::Rationals => "Q".to_string(),
            FieldKind::RationalFunctions => "Q(u)".to_string(),
            FieldKind::Galois(f) => format!(
                "F_{}^{} = F_{}[w]/({})",
                f.characteristic(),
                f.degree(),
                f.characteristic(),
                modulus_string(f.modulus())
            ),
        }
    }
}

fn modulus_string(m: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "w".to_string(),
            _ => format!("w^{i}"),
        };
        parts.push(match (i, c) {
            (0, _) => c.to_string(),
            (_, 1) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    parts.join("+")
}

/// An exact element of `L`, tagged by the field it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    RatFunc(RationalFunction),
    Galois(GaloisFieldElement),
}

impl FieldValue {
    pub fn kind_matches(&self, kind: &FieldKind) -> bool {
        match (self, kind) {
            (FieldValue::Rational(_), FieldKind::Rationals) => true,
            (FieldValue::RatFunc(_), FieldKind::RationalFunctions) => true,
            (FieldValue::Galois(a), FieldKind::Galois(f)) => {
                Arc::ptr_eq(a.field(), f) || **a.field() == **f
            }
            _ => false,
        }
    }

    fn same_field(&self, other: &FieldValue) -> bool {
        match (self, other) {
            (FieldValue::Rational(_), FieldValue::Rational(_)) => true,
            (FieldValue::RatFunc(_), FieldValue::RatFunc(_)) => true,
            (FieldValue::Galois(a), FieldValue::Galois(b)) => a.same_field(b),
            _ => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_zero(),
            FieldValue::RatFunc(f) => f.is_zero(),
            FieldValue::Galois(g) => g.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_one(),
            FieldValue::RatFunc(f) => f.is_one(),
            FieldValue::Galois(g) => g.is_one(),
        }
    }

    /// Zero of the same field.
    pub fn zero_like(&self) -> FieldValue {
        match self {
            FieldValue::Rational(_) => FieldValue::Rational(BigRational::zero()),
            FieldValue::RatFunc(_) => FieldValue::RatFunc(RationalFunction::zero()),
            FieldValue::Galois(g) => FieldValue::Galois(GaloisFieldElement::from_int(g.field(), 0)),
        }
    }

    // The operations below assume both operands come from one field; series
    // code checks that once per context. The checked versions are the free
    // functions `field_add` etc.

    pub(crate) fn add(&self, other: &FieldValue) -> FieldValue {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            (FieldValue::RatFunc(a), FieldValue::RatFunc(b)) => FieldValue::RatFunc(a.add(b)),
            (FieldValue::Galois(a), FieldValue::Galois(b)) => FieldValue::Galois(a.add(b)),
            _ => unreachable!("field tag mismatch"),
        }
    }

    pub(crate) fn neg(&self) -> FieldValue {
        match self {
            FieldValue::Rational(a) => FieldValue::Rational(-a),
            FieldValue::RatFunc(a) => FieldValue::RatFunc(a.neg()),
            FieldValue::Galois(a) => FieldValue::Galois(a.neg()),
        }
    }

    pub(crate) fn sub(&self, other: &FieldValue) -> FieldValue {
        self.add(&other.neg())
    }

    pub(crate) fn mul(&self, other: &FieldValue) -> FieldValue {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            (FieldValue::RatFunc(a), FieldValue::RatFunc(b)) => FieldValue::RatFunc(a.mul(b)),
            (FieldValue::Galois(a), FieldValue::Galois(b)) => FieldValue::Galois(a.mul(b)),
            _ => unreachable!("field tag mismatch"),
        }
    }

    pub(crate) fn inv(&self) -> Option<FieldValue> {
        match self {
            FieldValue::Rational(a) => (!a.is_zero()).then(|| FieldValue::Rational(a.recip())),
            FieldValue::RatFunc(a) => a.inv().map(FieldValue::RatFunc),
            FieldValue::Galois(a) => a.inv().map(FieldValue::Galois),
        }
    }

    /// Rough size in bits, used by diagnostics and benchmarks.
    pub fn bit_size(&self) -> u64 {
        match self {
            FieldValue::Rational(q) => q.numer().bits() + q.denom().bits(),
            FieldValue::RatFunc(f) => f.bit_size(),
            FieldValue::Galois(g) => g.coeffs().len() as u64,
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldValue::RatFunc(r) => write!(f, "{r}"),
            FieldValue::Galois(g) => write!(f, "{g}"),
        }
    }
}

fn check_same(a: &FieldValue, b: &FieldValue) -> Result<()> {
    if a.same_field(b) {
        Ok(())
    } else {
        Err(Error::usage("operands belong to different fields"))
    }
}

pub fn field_add(a: &FieldValue, b: &FieldValue) -> Result<FieldValue> {
    check_same(a, b)?;
    Ok(a.add(b))
}

pub fn field_sub(a: &FieldValue, b: &FieldValue) -> Result<FieldValue> {
    check_same(a, b)?;
    Ok(a.sub(b))
}

pub fn field_neg(a: &FieldValue) -> FieldValue {
    a.neg()
}

pub fn field_mul(a: &FieldValue, b: &FieldValue) -> Result<FieldValue> {
    check_same(a, b)?;
    Ok(a.mul(b))
}

pub fn field_inv(a: &FieldValue) -> Result<FieldValue> {
    a.inv().ok_or_else(|| Error::domain("inverse of zero field element"))
}

/// The pair `(L, sigma)` that defines `D = L((t, sigma))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewContext {
    field: FieldKind,
    sigma: Automorphism,
}

impl SkewContext {
    pub fn new(field: FieldKind, sigma: Automorphism) -> Result<Arc<Self>> {
        sigma.validate_for(&field)?;
        Ok(Arc::new(SkewContext { field, sigma }))
    }

    /// `Q(u)` with `u -> u + c`.
    pub fn shift(c: i64) -> Result<Arc<Self>> {
        SkewContext::new(
            FieldKind::RationalFunctions,
            Automorphism::Shift(BigRational::from_integer(c.into())),
        )
    }

    /// `F_4 = F_2[w]/(w^2+w+1)` with the Frobenius `x -> x^2`.
    pub fn frobenius_f4() -> Arc<Self> {
        SkewContext::new(FieldKind::galois(GaloisField::f4()), Automorphism::Frobenius)
            .expect("Frobenius is valid on F_4")
    }

    pub fn field(&self) -> &FieldKind {
        &self.field
    }

    pub fn sigma(&self) -> &Automorphism {
        &self.sigma
    }

    pub fn describe(&self) -> String {
        format!("L = {}, sigma = {}", self.field.describe(), self.sigma)
    }

    pub fn zero(&self) -> FieldValue {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldValue {
        match &self.field {
            FieldKind::Rationals => FieldValue::Rational(BigRational::from_integer(n.into())),
            FieldKind::RationalFunctions => {
                FieldValue::RatFunc(RationalFunction::constant(BigRational::from_integer(n.into())))
            }
            FieldKind::Galois(f) => FieldValue::Galois(GaloisFieldElement::from_int(f, n)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldValue {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers map into every field")
    }

    /// Image of a rational number in `L`; fails in characteristic `p` when
    /// `p` divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldValue> {
        match &self.field {
            FieldKind::Rationals => Ok(FieldValue::Rational(q.clone())),
            FieldKind::RationalFunctions => Ok(FieldValue::RatFunc(RationalFunction::constant(q.clone()))),
            FieldKind::Galois(f) => {
                let p = BigInt::from(f.characteristic());
                let reduce = |x: &BigInt| -> i64 {
                    use num_integer::Integer;
                    use num_traits::ToPrimitive;
                    x.mod_floor(&p).to_i64().unwrap()
                };
                let num = GaloisFieldElement::from_int(f, reduce(q.numer()));
                let den = GaloisFieldElement::from_int(f, reduce(q.denom()));
                let den_inv = den.inv().ok_or_else(|| {
                    Error::domain(format!("denominator {} vanishes in characteristic {}", q.denom(), p))
                })?;
                Ok(FieldValue::Galois(num.mul(&den_inv)))
            }
        }
    }

    /// The field generator `u` of `Q(u)` or `w` of `F_{p^k}`; `None` over `Q`.
    pub fn generator(&self) -> Option<FieldValue> {
        match &self.field {
            FieldKind::Rationals => None,
            FieldKind::RationalFunctions => Some(FieldValue::RatFunc(RationalFunction::u())),
            FieldKind::Galois(f) => Some(FieldValue::Galois(GaloisFieldElement::generator(f))),
        }
    }

    pub fn generator_name(&self) -> Option<&'static str> {
        match &self.field {
            FieldKind::Rationals => None,
            FieldKind::RationalFunctions => Some("u"),
            FieldKind::Galois(_) => Some("w"),
        }
    }

    pub fn contains(&self, a: &FieldValue) -> bool {
        a.kind_matches(&self.field)
    }

    pub fn check_value(&self, a: &FieldValue) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::usage(format!("value {a} does not belong to {}", self.field.describe())))
        }
    }

    /// `sigma^i(a)` by closed form.
    pub fn apply_power(&self, i: i64, a: &FieldValue) -> FieldValue {
        self.sigma.apply_power_unchecked(i, a)
    }

    pub fn sigma_order(&self) -> AutOrder {
        self.sigma.order(&self.field)
    }

    /// Membership in the fixed field `F` of `sigma`.
    pub fn is_fixed(&self, a: &FieldValue) -> bool {
        self.sigma.apply_power_unchecked(1, a) == *a
    }
}

/// `sigma(a)`.
pub fn aut_apply(sigma: &Automorphism, a: &FieldValue) -> Result<FieldValue> {
    sigma.apply_power(1, a)
}

/// `sigma^i(a)` for any integer `i`, via the closed form of each variant.
pub fn aut_apply_power(sigma: &Automorphism, i: i64, a: &FieldValue) -> Result<FieldValue> {
    sigma.apply_power(i, a)
}

pub fn aut_order(sigma: &Automorphism, field: &FieldKind) -> AutOrder {
    sigma.order(field)
}

/// True iff `sigma(a) = a`, i.e. `a` lies in the fixed field.
pub fn is_fixed(sigma: &Automorphism, a: &FieldValue) -> Result<bool> {
    Ok(sigma.apply_power(1, a)? == *a)
}
