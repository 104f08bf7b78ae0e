//! Dense univariate polynomials over `Z`, lowest degree first.
//!
//! Rational functions keep numerator and denominator as primitive integer
//! polynomials, so everything hot (products, Taylor shifts, gcds) runs on
//! big integers without per-coefficient fraction reduction. The gcd is a
//! modular algorithm: images modulo 62-bit primes, CRT, and a trial
//! division check.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::from_coeffs(vec![c])
    }

    /// `u`
    pub fn x() -> Self {
        ZPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    /// Gcd of the coefficients, always nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits off `content * sign(lc)`, leaving a primitive polynomial with
    /// positive leading coefficient.
    pub fn primitive_split(&self) -> (BigInt, ZPoly) {
        if self.is_zero() {
            return (BigInt::zero(), ZPoly::zero());
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return (c, self.clone());
        }
        let coeffs = self.coeffs.iter().map(|x| x / &c).collect();
        (c, ZPoly { coeffs })
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        ZPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        if k.is_zero() {
            return ZPoly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ZPoly::from_coeffs(out)
    }

    /// Exact quotient `self / d` over `Z`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if d.is_one() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let dd = d.degree().unwrap();
        let ds = self.degree().unwrap();
        if ds < dd {
            return None;
        }
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                if !di.is_zero() {
                    r[k + i] -= &qk * di;
                }
            }
            q[k] = qk;
        }
        if r[..dd].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::from_coeffs(q))
    }

    /// `p(u + s)` for an integer `s`.
    pub fn taylor_shift(&self, s: &BigInt) -> ZPoly {
        if s.is_zero() || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        let n = c.len();
        let unit = s.is_one();
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                if c[j + 1].is_zero() {
                    continue;
                }
                let t = if unit { c[j + 1].clone() } else { &c[j + 1] * s };
                c[j] += t;
            }
        }
        ZPoly::from_coeffs(c)
    }

    /// Coefficient `k` multiplied by `num^k * den^(d-k)`, i.e. `den^d * p(num/den * u)`.
    pub fn dilate(&self, num: &BigInt, den: &BigInt) -> ZPoly {
        let d = match self.degree() {
            Some(d) => d,
            None => return ZPoly::zero(),
        };
        let mut num_pows = vec![BigInt::one()];
        let mut den_pows = vec![BigInt::one()];
        for _ in 0..d {
            let a = num_pows.last().unwrap() * num;
            num_pows.push(a);
            let b = den_pows.last().unwrap() * den;
            den_pows.push(b);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &num_pows[k] * &den_pows[d - k])
            .collect();
        ZPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        modp::trim(&mut out);
        out
    }

    /// Primitive gcd with positive leading coefficient of two primitive
    /// polynomials.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return other.primitive_split().1;
        }
        if other.is_zero() {
            return self.primitive_split().1;
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return ZPoly::one();
        }
        if self == other {
            return self.primitive_split().1;
        }
        modular_gcd(self, other)
    }
}

/// Brown-style modular gcd. Inputs need not be primitive; the output is
/// the primitive gcd with positive leading coefficient.
fn modular_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (_, a) = a.primitive_split();
    let (_, b) = b.primitive_split();
    let gamma = a.lc().gcd(b.lc());

    // accumulated CRT image of gamma * gcd, with its modulus and degree
    let mut acc: Option<(Vec<BigInt>, BigInt, usize)> = None;
    let mut last_candidate: Option<ZPoly> = None;

    for p in modp::large_primes() {
        let pb = BigInt::from(p);
        if (a.lc() % &pb).is_zero() || (b.lc() % &pb).is_zero() {
            continue;
        }
        let ap = a.reduce_mod(p);
        let bp = b.reduce_mod(p);
        let mut g = modp::gcd(&ap, &bp, p);
        let dg = modp::degree(&g).unwrap_or(0);
        if dg == 0 {
            return ZPoly::one();
        }
        let gm = gamma.mod_floor(&pb).to_u64().unwrap();
        for c in g.iter_mut() {
            *c = modp::mul_mod(*c, gm, p);
        }
        g.resize(dg + 1, 0);

        let restart = match &acc {
            None => true,
            Some((_, _, d)) if dg < *d => true,
            Some((_, _, d)) if dg > *d => continue,
            _ => false,
        };
        if restart {
            acc = Some((g.iter().map(|&c| BigInt::from(c)).collect(), pb, dg));
            last_candidate = None;
            continue;
        }

        let (coeffs, modulus, _) = acc.as_mut().unwrap();
        // CRT: x = c (mod M), x = g (mod p)
        let m_mod_p = modulus.mod_floor(&pb).to_u64().unwrap();
        let m_inv = modp::inv_mod(m_mod_p, p);
        for (c, &gp) in coeffs.iter_mut().zip(&g) {
            let c_mod_p = c.mod_floor(&pb).to_u64().unwrap();
            let delta = modp::mul_mod(modp::sub_mod(gp, c_mod_p, p), m_inv, p);
            if delta != 0 {
                *c += &*modulus * BigInt::from(delta);
            }
        }
        *modulus *= &pb;

        let half = &*modulus >> 1usize;
        let symmetric: Vec<BigInt> = coeffs
            .iter()
            .map(|c| if *c > half { c - &*modulus } else { c.clone() })
            .collect();
        let (_, cand) = ZPoly::from_coeffs(symmetric).primitive_split();
        if last_candidate.as_ref() == Some(&cand)
            && a.div_exact(&cand).is_some()
            && b.div_exact(&cand).is_some()
        {
            return cand;
        }
        last_candidate = Some(cand);
    }
    unreachable!("prime supply is unbounded")
}
