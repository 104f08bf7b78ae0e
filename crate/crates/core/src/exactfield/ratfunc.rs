use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::UniPolynomial;
use super::zpoly::ZPoly;

/// An element of `Q(u)` in canonical form.
///
/// Stored as `scale * num / den` with `num`, `den` primitive integer
/// polynomials with positive leading coefficients and `gcd(num, den) = 1`.
/// Zero is `0 * 1/1`. This is equivalent to the reduced fraction with a
/// monic denominator over `Q` (see [`RationalFunction::numerator`] and
/// [`RationalFunction::denominator`]), so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    scale: BigRational,
    num: ZPoly,
    den: ZPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            scale: BigRational::zero(),
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction {
            scale: c,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    /// The generator `u`.
    pub fn u() -> Self {
        RationalFunction {
            scale: BigRational::one(),
            num: ZPoly::x(),
            den: ZPoly::one(),
        }
    }

    /// `num / den`; `None` if `den` is the zero polynomial.
    pub fn from_polys(num: &UniPolynomial, den: &UniPolynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (sn, pn) = num.to_zpoly();
        let (sd, pd) = den.to_zpoly();
        Some(Self::from_parts(sn / sd, pn, pd))
    }

    /// Normalizes `scale * num / den` for primitive `num`, `den` with positive
    /// leading coefficients that may share a factor.
    fn from_parts(scale: BigRational, num: ZPoly, den: ZPoly) -> Self {
        if scale.is_zero() || num.is_zero() {
            return RationalFunction::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        RationalFunction { scale, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.num.is_one() && self.den.is_one()
    }

    /// True for elements of `Q` (degree-0 numerator and denominator).
    pub fn is_constant(&self) -> bool {
        self.num.degree() == Some(0) && self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        self.is_constant().then_some(&self.scale)
    }

    /// Numerator of the reduced fraction whose denominator is monic.
    pub fn numerator(&self) -> UniPolynomial {
        if self.is_zero() {
            return UniPolynomial::zero();
        }
        let s = &self.scale / BigRational::from_integer(self.den.lc().clone());
        UniPolynomial::from_zpoly(&self.num, &s)
    }

    /// Monic denominator.
    pub fn denominator(&self) -> UniPolynomial {
        let s = BigRational::new(BigInt::one(), self.den.lc().clone());
        UniPolynomial::from_zpoly(&self.den, &s)
    }

    pub(crate) fn parts(&self) -> (&BigRational, &ZPoly, &ZPoly) {
        (&self.scale, &self.num, &self.den)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            scale: -&self.scale,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // a = sa*Na/(g*d1), b = sb*Nb/(g*d2); only g can share factors with the sum.
        let g = self.den.gcd(&other.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.div_exact(&g).unwrap(),
                other.den.div_exact(&g).unwrap(),
            )
        };
        let l = self.scale.denom().lcm(other.scale.denom());
        let ka = self.scale.numer() * (&l / self.scale.denom());
        let kb = other.scale.numer() * (&l / other.scale.denom());
        let m = self
            .num
            .mul(&d2)
            .scale(&ka)
            .add(&other.num.mul(&d1).scale(&kb));
        if m.is_zero() {
            return RationalFunction::zero();
        }
        let (c, m) = m.primitive_split();
        let h = if g.is_one() { ZPoly::one() } else { m.gcd(&g) };
        let (num, g) = if h.is_one() {
            (m, g)
        } else {
            (m.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
        };
        RationalFunction {
            scale: BigRational::new(c, l),
            num,
            den: g.mul(&d1).mul(&d2),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFunction::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RationalFunction {
            scale: &self.scale * &other.scale,
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RationalFunction {
            scale: self.scale.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    /// `f(u + s)`.
    pub fn shift(&self, s: &BigRational) -> Self {
        if s.is_zero() || self.is_constant() || self.is_zero() {
            return self.clone();
        }
        if s.is_integer() {
            // integer Taylor shifts are automorphisms of Z[u]: content and lc survive
            let k = s.numer();
            return RationalFunction {
                scale: self.scale.clone(),
                num: self.num.taylor_shift(k),
                den: self.den.taylor_shift(k),
            };
        }
        let (a, b) = (s.numer(), s.denom());
        let one = BigInt::one();
        let sub = |p: &ZPoly| -> (BigRational, ZPoly) {
            // p(u + a/b) = b^-d * (b^d p(u/b))(b u + a)
            let d = p.degree().unwrap_or(0);
            let q = p.dilate(&one, b).taylor_shift(a).dilate(b, &one);
            let (c, q) = q.primitive_split();
            (BigRational::new(c, num_traits::pow(b.clone(), d)), q)
        };
        let (cn, num) = sub(&self.num);
        let (cd, den) = sub(&self.den);
        RationalFunction {
            scale: &self.scale * cn / cd,
            num,
            den,
        }
    }

    /// `f(c * u)` for nonzero `c`.
    pub fn dilate(&self, c: &BigRational) -> Self {
        debug_assert!(!c.is_zero());
        if c.is_one() || self.is_constant() || self.is_zero() {
            return self.clone();
        }
        let (a, b) = (c.numer(), c.denom());
        let sub = |p: &ZPoly| -> (BigRational, ZPoly) {
            let d = p.degree().unwrap_or(0);
            let (k, q) = p.dilate(a, b).primitive_split();
            (BigRational::new(k, num_traits::pow(b.clone(), d)), q)
        };
        let (cn, num) = sub(&self.num);
        let (cd, den) = sub(&self.den);
        RationalFunction {
            scale: &self.scale * cn / cd,
            num,
            den,
        }
    }

    /// Rough size measure (total coefficient bits), for diagnostics.
    pub fn bit_size(&self) -> u64 {
        let b = |p: &ZPoly| p.coeffs().iter().map(|c| c.bits()).sum::<u64>();
        b(&self.num) + b(&self.den) + self.scale.numer().bits() + self.scale.denom().bits()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.numerator();
        if self.den.is_one() {
            return write!(f, "{n}");
        }
        let d = self.denominator();
        let n_str = n.to_string();
        let n_str = if n.term_count() > 1 || n_str.contains('/') {
            format!("({n_str})")
        } else {
            n_str
        };
        let d_str = d.to_string();
        let d_str = if d.term_count() > 1 {
            format!("({d_str})")
        } else {
            d_str
        };
        write!(f, "{n_str}/{d_str}")
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        RationalFunction::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(c: &[i64]) -> UniPolynomial {
        UniPolynomial::new(c.iter().map(|&x| q(x, 1)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::from_polys(&poly(n), &poly(d)).unwrap()
    }

    #[test]
    fn canonical_form_is_reduced_and_monic() {
        // (2u+2)/(4u^2-4) = (1/2)/(u-1)
        let f = rf(&[2, 2], &[-4, 0, 4]);
        assert_eq!(f.denominator(), poly(&[-1, 1]));
        assert_eq!(f.numerator(), UniPolynomial::new(vec![q(1, 2)]));
        assert_eq!(f, rf(&[1], &[-2, 2]));
    }

    #[test]
    fn inverse_of_fraction() {
        // ((u+1)/u)^-1 = u/(u+1)
        let f = rf(&[1, 1], &[0, 1]);
        assert_eq!(f.inv().unwrap(), rf(&[0, 1], &[1, 1]));
        assert!(RationalFunction::zero().inv().is_none());
        assert!(f.mul(&f.inv().unwrap()).is_one());
    }

    #[test]
    fn add_with_shared_denominator_factors() {
        // 1/(u(u+1)) + 1/(u(u+2)) = (2u+3)/(u(u+1)(u+2))
        let a = rf(&[1], &[0, 1, 1]);
        let b = rf(&[1], &[0, 2, 1]);
        let expect = rf(&[3, 2], &[0, 2, 3, 1]);
        assert_eq!(a.add(&b), expect);
        // u/(u+1) - 1/(u+1) ... (u-1)/(u+1); and x - x = 0
        assert!(a.sub(&a).is_zero());
        // cancellation to a polynomial: u/(u+1) + 1/(u+1) = 1
        assert!(rf(&[0, 1], &[1, 1]).add(&rf(&[1], &[1, 1])).is_one());
    }

    #[test]
    fn shift_and_dilate() {
        let u2 = rf(&[0, 0, 1], &[1]);
        assert_eq!(u2.shift(&q(1, 1)), rf(&[1, 2, 1], &[1]));
        // (u)^2 at u + 1/2 = u^2 + u + 1/4
        assert_eq!(
            u2.shift(&q(1, 2)),
            RationalFunction::from_polys(
                &UniPolynomial::new(vec![q(1, 4), q(1, 1), q(1, 1)]),
                &poly(&[1])
            )
            .unwrap()
        );
        let f = rf(&[1, 1], &[0, 1]); // (u+1)/u
        assert_eq!(f.dilate(&q(-1, 1)), rf(&[1, -1], &[0, -1]));
        assert_eq!(f.dilate(&q(2, 3)).dilate(&q(3, 2)), f);
        assert_eq!(f.shift(&q(-5, 7)).shift(&q(5, 7)), f);
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[1, 1], &[0, 1]).to_string(), "(u+1)/u");
        assert_eq!(rf(&[1, 2, 1], &[1]).to_string(), "u^2+2*u+1");
        assert_eq!(rf(&[1], &[-1, 1]).to_string(), "1/(u-1)");
        assert_eq!(rf(&[-3], &[0, 0, 1]).to_string(), "-3/u^2");
        assert_eq!(rf(&[1], &[0, 2]).to_string(), "(1/2)/u");
        assert_eq!(RationalFunction::zero().to_string(), "0");
    }
}
