use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

use super::{FieldKind, FieldValue};

/// A field automorphism `sigma` of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Automorphism {
    Identity,
    /// `u -> u + c` on `Q(u)`, `c != 0`.
    Shift(BigRational),
    /// `u -> c * u` on `Q(u)`, `c != 0`.
    Scale(BigRational),
    /// `x -> x^p` on `F_{p^k}`.
    Frobenius,
}

/// Order of an automorphism in `Aut(L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for AutOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutOrder::Finite(n) => write!(f, "{n}"),
            AutOrder::Infinite => write!(f, "infinite"),
        }
    }
}

impl Automorphism {
    pub(crate) fn validate_for(&self, field: &FieldKind) -> Result<()> {
        match (self, field) {
            (Automorphism::Identity, _) => Ok(()),
            (Automorphism::Shift(c), FieldKind::RationalFunctions) => {
                if c.is_zero() {
                    Err(Error::usage("shift parameter must be nonzero"))
                } else {
                    Ok(())
                }
            }
            (Automorphism::Scale(c), FieldKind::RationalFunctions) => {
                if c.is_zero() {
                    Err(Error::usage("scale parameter must be nonzero"))
                } else {
                    Ok(())
                }
            }
            (Automorphism::Frobenius, FieldKind::Galois(_)) => Ok(()),
            (s, f) => Err(Error::usage(format!(
                "automorphism {s} is not defined on {}",
                f.describe()
            ))),
        }
    }

    fn accepts(&self, a: &FieldValue) -> bool {
        matches!(
            (self, a),
            (Automorphism::Identity, _)
                | (Automorphism::Shift(_), FieldValue::RatFunc(_))
                | (Automorphism::Scale(_), FieldValue::RatFunc(_))
                | (Automorphism::Frobenius, FieldValue::Galois(_))
        )
    }

    pub fn apply(&self, a: &FieldValue) -> Result<FieldValue> {
        self.apply_power(1, a)
    }

    pub fn apply_power(&self, i: i64, a: &FieldValue) -> Result<FieldValue> {
        if !self.accepts(a) {
            return Err(Error::usage(format!("automorphism {self} cannot act on {a}")));
        }
        Ok(self.apply_power_unchecked(i, a))
    }

    /// Closed forms: `Shift(c)^i = u -> u + i*c`, `Scale(c)^i = u -> c^i * u`,
    /// `Frobenius^i = x -> x^(p^(i mod k))`.
    pub(crate) fn apply_power_unchecked(&self, i: i64, a: &FieldValue) -> FieldValue {
        if i == 0 {
            return a.clone();
        }
        match (self, a) {
            (Automorphism::Identity, _) => a.clone(),
            (Automorphism::Shift(c), FieldValue::RatFunc(f)) => {
                FieldValue::RatFunc(f.shift(&(c * BigRational::from_integer(i.into()))))
            }
            (Automorphism::Scale(c), FieldValue::RatFunc(f)) => {
                let base = if i < 0 { c.recip() } else { c.clone() };
                let m = num_traits::pow(base, i.unsigned_abs() as usize);
                FieldValue::RatFunc(f.dilate(&m))
            }
            (Automorphism::Frobenius, FieldValue::Galois(g)) => {
                let k = g.field().degree() as i64;
                FieldValue::Galois(g.frobenius(i.rem_euclid(k) as usize))
            }
            _ => unreachable!("automorphism/field mismatch"),
        }
    }

    /// Group-theoretic order in `Aut(L)`. `Frobenius` on `F_{p^k}` has order `k`.
    pub fn order(&self, field: &FieldKind) -> AutOrder {
        match self {
            Automorphism::Identity => AutOrder::Finite(1),
            Automorphism::Shift(_) => AutOrder::Infinite,
            Automorphism::Scale(c) => {
                if c.is_one() {
                    AutOrder::Finite(1)
                } else if (-c).is_one() {
                    AutOrder::Finite(2)
                } else {
                    // the only roots of unity in Q are 1 and -1
                    AutOrder::Infinite
                }
            }
            Automorphism::Frobenius => match field {
                FieldKind::Galois(f) => AutOrder::Finite(f.degree() as u64),
                _ => AutOrder::Finite(1),
            },
        }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |c: &BigRational| {
            if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            }
        };
        match self {
            Automorphism::Identity => write!(f, "identity"),
            Automorphism::Shift(c) => write!(f, "shift:{}", q(c)),
            Automorphism::Scale(c) => {
                if c.is_negative() {
                    write!(f, "scale:-{}", q(&c.abs()))
                } else {
                    write!(f, "scale:{}", q(c))
                }
            }
            Automorphism::Frobenius => write!(f, "frobenius"),
        }
    }
}
