use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::modp;

/// `F_{p^k} = F_p[w] / (modulus)`, with the modulus pinned explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisField {
    p: u64,
    k: usize,
    /// Monic irreducible modulus, lowest degree first, `k + 1` entries.
    modulus: Vec<u64>,
}

impl GaloisField {
    /// `p` prime, `modulus` of degree `k >= 1` given lowest coefficient first.
    /// A non-monic modulus is scaled to monic; reducible moduli are rejected.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self> {
        if !modp::is_prime(p) {
            return Err(Error::usage(format!("characteristic {p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::usage("characteristic must be below 2^31"));
        }
        let mut m: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        modp::make_monic(&mut m, p);
        let k = match modp::degree(&m) {
            Some(k) if k >= 1 => k,
            _ => return Err(Error::usage("modulus must have degree at least 1")),
        };
        if !modp::is_irreducible(&m, p) {
            return Err(Error::usage(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(GaloisField { p, k, modulus: m })
    }

    /// `F_4 = F_2[w]/(w^2+w+1)`.
    pub fn f4() -> Self {
        GaloisField::new(2, &[1, 1, 1]).expect("w^2+w+1 is irreducible over F_2")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, if it fits in `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.k as u32)
    }
}

/// An element of a [`GaloisField`]: a reduced representative with exactly
/// `k` coefficients in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaloisFieldElement {
    field: Arc<GaloisField>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for GaloisFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({})", self)
    }
}

impl GaloisFieldElement {
    pub fn from_coeffs(field: &Arc<GaloisField>, coeffs: &[u64]) -> Self {
        let p = field.p;
        let mut v: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
        v = modp::rem(&v, &field.modulus, p);
        v.resize(field.k, 0);
        GaloisFieldElement {
            field: field.clone(),
            coeffs: v,
        }
    }

    pub fn from_int(field: &Arc<GaloisField>, n: i64) -> Self {
        let p = field.p as i64;
        let c = n.rem_euclid(p) as u64;
        GaloisFieldElement::from_coeffs(field, &[c])
    }

    /// The class of `w`.
    pub fn generator(field: &Arc<GaloisField>) -> Self {
        GaloisFieldElement::from_coeffs(field, &[0, 1])
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Member of the prime field `F_p`.
    pub fn is_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn wrap(&self, mut v: Vec<u64>) -> Self {
        v.resize(self.field.k, 0);
        GaloisFieldElement {
            field: self.field.clone(),
            coeffs: v,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.field.p;
        let v = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| modp::add_mod(a, b, p))
            .collect();
        self.wrap(v)
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        let v = self.coeffs.iter().map(|&a| modp::sub_mod(0, a, p)).collect();
        self.wrap(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.field.p;
        let prod = modp::mul(&self.coeffs, &other.coeffs, p);
        self.wrap(modp::rem(&prod, &self.field.modulus, p))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.p;
        let mut a = self.coeffs.clone();
        modp::trim(&mut a);
        modp::inverse_mod_poly(&a, &self.field.modulus, p).map(|v| self.wrap(v))
    }

    pub fn pow(&self, exp: u128) -> Self {
        let p = self.field.p;
        let mut a = self.coeffs.clone();
        modp::trim(&mut a);
        if a.is_empty() {
            return if exp == 0 { self.wrap(vec![1]) } else { self.clone() };
        }
        self.wrap(modp::pow_mod_poly(&a, exp, &self.field.modulus, p))
    }

    /// `x^(p^e)`, the `e`-th Frobenius power, by `e` successive `p`-th powers.
    pub fn frobenius(&self, e: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..e {
            out = out.pow(self.field.p as u128);
        }
        out
    }
}

/// Written in `w`, highest degree first: `w+1`, `2*w^2+1`, `0`.
impl fmt::Display for GaloisFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
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
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}
