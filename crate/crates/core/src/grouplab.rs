//! Multiplicative commutators and centre checks in `D = L((t, sigma))`.
//!
//! The valuation `v: D* -> Z` is a group homomorphism onto an abelian
//! group, so every commutator `x y x^-1 y^-1` lands in `ker(v)`. The
//! operations here compute commutators exactly (at working precision) and
//! record their valuations so that containment can be checked directly.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{FieldKind, FieldValue, GaloisFieldElement, SkewContext};
use crate::skewseries::{Precision, SkewLaurentSeries, Valuation, DEFAULT_PRECISION};

#[derive(Clone, Debug)]
pub struct CommutatorRecord {
    pub x: SkewLaurentSeries,
    pub y: SkewLaurentSeries,
    pub value: SkewLaurentSeries,
    pub valuation_of_value: Valuation,
}

/// `x y x^-1 y^-1`, evaluated as `((x*y)*x^-1)*y^-1`.
pub fn commutator(x: &SkewLaurentSeries, y: &SkewLaurentSeries) -> Result<CommutatorRecord> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::domain("commutator of a zero series"));
    }
    let value = x.mul(y)?.mul(&x.inverse()?)?.mul(&y.inverse()?)?;
    Ok(CommutatorRecord {
        x: x.clone(),
        y: y.clone(),
        valuation_of_value: value.valuation(),
        value,
    })
}

/// Left-to-right product of commutator values: a generic element of `D'`.
pub fn commutator_product(records: &[CommutatorRecord]) -> Result<SkewLaurentSeries> {
    let (first, rest) = records
        .split_first()
        .ok_or_else(|| Error::usage("commutator product of an empty list"))?;
    rest.iter()
        .try_fold(first.value.clone(), |acc, r| acc.mul(&r.value))
}

/// Membership in `ker(v)`: valuation exactly 0.
pub fn kernel_check(s: &SkewLaurentSeries) -> Result<bool> {
    match s.valuation() {
        Valuation::Finite(n) => Ok(n == 0),
        Valuation::Zero => Err(Error::domain("valuation of the zero series is undefined")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CentreVerdict {
    CentralToPrecision,
    NonCentral,
}

#[derive(Clone, Debug)]
pub struct CentreReport {
    pub candidate: SkewLaurentSeries,
    pub probe_count: usize,
    /// Smallest precision at which a commutation was compared.
    pub precision: i64,
    pub verdict: CentreVerdict,
    /// First probe `g` with `candidate * g != g * candidate`, and its index.
    pub witness: Option<(usize, SkewLaurentSeries)>,
}

impl CentreReport {
    pub fn is_central(&self) -> bool {
        self.verdict == CentreVerdict::CentralToPrecision
    }
}

/// Tests `candidate * g == g * candidate` to precision for every probe.
pub fn centre_check(
    candidate: &SkewLaurentSeries,
    probes: &[SkewLaurentSeries],
) -> Result<CentreReport> {
    let mut precision = i64::MAX;
    for (idx, g) in probes.iter().enumerate() {
        let left = candidate.mul(g)?;
        let right = g.mul(candidate)?;
        precision = precision.min(left.precision().min(right.precision()));
        if !left.equals_to_precision(&right) {
            return Ok(CentreReport {
                candidate: candidate.clone(),
                probe_count: idx + 1,
                precision,
                verdict: CentreVerdict::NonCentral,
                witness: Some((idx, g.clone())),
            });
        }
    }
    Ok(CentreReport {
        candidate: candidate.clone(),
        probe_count: probes.len(),
        precision,
        verdict: CentreVerdict::CentralToPrecision,
        witness: None,
    })
}

/// Shape of randomly drawn series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesProfile {
    pub lead_min: i64,
    pub lead_max: i64,
    /// Probability that a coefficient after the lead is nonzero.
    pub density: f64,
    pub precision: i64,
}

impl Default for SeriesProfile {
    fn default() -> Self {
        SeriesProfile {
            lead_min: -3,
            lead_max: 3,
            density: 0.7,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl SeriesProfile {
    pub fn with_precision(precision: impl Into<Precision>) -> Self {
        SeriesProfile {
            precision: precision.into().0,
            ..SeriesProfile::default()
        }
    }

    /// Lead 0, every coefficient nonzero: the benchmark shape.
    pub fn dense(len: i64) -> Self {
        SeriesProfile {
            lead_min: 0,
            lead_max: 0,
            density: 1.0,
            precision: len,
        }
    }
}

/// Nonzero coefficient atoms that random series draw from.
pub fn atom_pool(ctx: &SkewContext) -> Vec<FieldValue> {
    match ctx.field() {
        FieldKind::Rationals => {
            let mut v: Vec<FieldValue> = (-5..=5).filter(|&n| n != 0).map(|n| ctx.from_int(n)).collect();
            let half = num_rational::BigRational::new(1.into(), 2.into());
            let third = num_rational::BigRational::new((-1).into(), 3.into());
            v.push(FieldValue::Rational(half));
            v.push(FieldValue::Rational(third));
            v
        }
        FieldKind::RationalFunctions => {
            let mut v: Vec<FieldValue> = (-5..=5).filter(|&n| n != 0).map(|n| ctx.from_int(n)).collect();
            let u = ctx.generator().unwrap();
            let one = ctx.one();
            let u_plus = u.add(&one);
            let u_minus = u.sub(&one);
            v.push(u_plus.inv().unwrap());
            v.push(u.inv().unwrap());
            v.push(u_plus);
            v.push(u_minus);
            v.push(u);
            v
        }
        FieldKind::Galois(f) => {
            let order = f.order().unwrap_or(u128::MAX);
            if order <= 1024 {
                let (p, k) = (f.characteristic(), f.degree());
                (1..order as u64)
                    .map(|mut n| {
                        let mut digits = Vec::with_capacity(k);
                        for _ in 0..k {
                            digits.push(n % p);
                            n /= p;
                        }
                        FieldValue::Galois(GaloisFieldElement::from_coeffs(f, &digits))
                    })
                    .collect()
            } else {
                // too many to enumerate: a fixed sample instead
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let mut v = Vec::new();
                while v.len() < 64 {
                    let digits: Vec<u64> =
                        (0..f.degree()).map(|_| rng.gen_range(0..f.characteristic())).collect();
                    let e = GaloisFieldElement::from_coeffs(f, &digits);
                    if !e.is_zero() {
                        v.push(FieldValue::Galois(e));
                    }
                }
                v
            }
        }
    }
}

/// Deterministic nonzero random series for `seed`.
pub fn random_series(ctx: &Arc<SkewContext>, seed: u64, profile: &SeriesProfile) -> SkewLaurentSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_series_with(ctx, &mut rng, profile)
}

pub fn random_series_with<R: Rng>(
    ctx: &Arc<SkewContext>,
    rng: &mut R,
    profile: &SeriesProfile,
) -> SkewLaurentSeries {
    let pool = atom_pool(ctx);
    let hi = profile.lead_max.min(profile.precision - 1);
    let lead = rng.gen_range(profile.lead_min..=hi);
    let len = (profile.precision - lead) as usize;
    let mut coeffs = Vec::with_capacity(len);
    coeffs.push(pool.choose(rng).unwrap().clone());
    for _ in 1..len {
        if rng.gen_bool(profile.density) {
            coeffs.push(pool.choose(rng).unwrap().clone());
        } else {
            coeffs.push(ctx.zero());
        }
    }
    SkewLaurentSeries::from_dense(ctx.clone(), lead, coeffs, profile.precision)
}

/// A random element of the fixed field `F`: rational constants over `Q` and
/// `Q(u)` (the integers -5..5 and a few fractions), prime-field elements
/// over `F_{p^k}`. May be zero.
pub fn random_fixed_scalar<R: Rng>(ctx: &SkewContext, rng: &mut R) -> FieldValue {
    match ctx.field() {
        FieldKind::Galois(f) => {
            let p = f.characteristic();
            ctx.from_int(rng.gen_range(0..p) as i64)
        }
        _ => {
            let num: i64 = rng.gen_range(-5..=5);
            let den: i64 = rng.gen_range(1..=3);
            ctx.from_rational(&num_rational::BigRational::new(num.into(), den.into()))
                .expect("rationals embed in characteristic 0")
        }
    }
}

/// Probe set: `t`, the field generator (when `L` has one), then `extra`
/// random series.
pub fn standard_probes(
    ctx: &Arc<SkewContext>,
    precision: i64,
    extra: usize,
    seed: u64,
) -> Vec<SkewLaurentSeries> {
    let mut probes = vec![SkewLaurentSeries::t(ctx, precision)];
    if let Some(g) = ctx.generator() {
        probes.push(SkewLaurentSeries::constant(ctx, g, precision));
    }
    let profile = SeriesProfile::with_precision(precision);
    for i in 0..extra {
        probes.push(random_series(ctx, derive_seed(seed, 0xC3, i as u64), &profile));
    }
    probes
}

/// Per-trial seed from a master seed, a stream tag and a trial index, so
/// trials are reproducible in any execution order.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::field_add;

    #[test]
    fn commutator_of_t_and_u() {
        let ctx = SkewContext::shift(1).unwrap();
        let t = SkewLaurentSeries::t(&ctx, 32);
        let u = ctx.generator().unwrap();
        let us = SkewLaurentSeries::constant(&ctx, u.clone(), 32);
        let rec = commutator(&t, &us).unwrap();
        // t u t^-1 = u + 1, so the commutator is (u+1)/u
        let expect = field_add(&u, &ctx.one()).unwrap().mul(&u.inv().unwrap());
        assert_eq!(rec.valuation_of_value, Valuation::Finite(0));
        assert_eq!(rec.value.leading_coeff().unwrap(), &expect);
        assert_eq!(rec.value.terms().count(), 1);
        assert!(kernel_check(&rec.value).unwrap());
    }

    #[test]
    fn trivial_commutators() {
        let ctx = SkewContext::shift(1).unwrap();
        let t = SkewLaurentSeries::t(&ctx, 32);
        let t2 = t.power(2).unwrap();
        let one = SkewLaurentSeries::one(&ctx, 32);
        let c = commutator(&t, &t2).unwrap().value;
        assert!(c.equals_to_precision(&one));
        let x = random_series(&ctx, 7, &SeriesProfile::default());
        assert!(commutator(&x, &x).unwrap().value.equals_to_precision(&one));
        assert!(commutator(&x, &SkewLaurentSeries::zero(&ctx, 32)).is_err());
        assert!(!kernel_check(&t).unwrap());
        assert!(kernel_check(&SkewLaurentSeries::zero(&ctx, 32)).is_err());
    }

    #[test]
    fn empty_product_is_rejected() {
        assert!(matches!(commutator_product(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn random_series_is_deterministic_and_nonzero() {
        let ctx = SkewContext::shift(1).unwrap();
        let p = SeriesProfile::default();
        assert_eq!(random_series(&ctx, 42, &p), random_series(&ctx, 42, &p));
        let f4 = SkewContext::frobenius_f4();
        for seed in 0..1000 {
            for c in [&ctx, &f4] {
                let s = random_series(c, seed, &p);
                let v = s.valuation().finite().expect("nonzero");
                assert!((-3..=3).contains(&v));
            }
        }
    }

    #[test]
    fn frobenius_centre() {
        let ctx = SkewContext::frobenius_f4();
        let probes = standard_probes(&ctx, 32, 20, 1);
        let t = SkewLaurentSeries::t(&ctx, 32);
        let t2 = t.power(2).unwrap();
        assert!(centre_check(&t2, &probes).unwrap().is_central());
        let r = centre_check(&t, &probes).unwrap();
        assert_eq!(r.verdict, CentreVerdict::NonCentral);
        let (idx, w) = r.witness.unwrap();
        assert_eq!(idx, 1);
        assert_eq!(w.leading_coeff().unwrap(), &ctx.generator().unwrap());
    }

    #[test]
    fn shift_context_has_no_central_powers_of_t() {
        let ctx = SkewContext::shift(1).unwrap();
        let probes = standard_probes(&ctx, 32, 0, 1);
        for k in 1..=4 {
            let tk = SkewLaurentSeries::t(&ctx, 32).power(k).unwrap();
            let r = centre_check(&tk, &probes).unwrap();
            assert_eq!(r.witness.unwrap().0, 1, "t^{k} must fail on u");
        }
    }
}
