mod common;

use std::sync::Arc;

use common::{f4, fv, oracle, oracle_context, oracle_series, series, shift};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewlab::exactfield::SkewContext;
use skewlab::grouplab::*;
use skewlab::skewseries::{SkewLaurentSeries, Valuation};
use skewlab::Error;

fn is_one(s: &SkewLaurentSeries) -> bool {
    s.equals_to_precision(&SkewLaurentSeries::one(s.context(), s.precision()))
}

#[test]
fn commutator_examples() {
    let ctx = shift();
    let t = SkewLaurentSeries::t(&ctx, 32);
    let u = series(&ctx, "u", 32);
    let rec = commutator(&t, &u).unwrap();
    assert_eq!(rec.valuation_of_value, Valuation::Finite(0));
    assert_eq!(rec.value.to_string(), "(u+1)/u*t^0 + O(t^31)");
    assert!(kernel_check(&rec.value).unwrap());

    let x = series(&ctx, "u*t^-1 + 2 + 1/u*t", 16);
    assert!(is_one(&commutator(&x, &x).unwrap().value));
    let t2 = SkewLaurentSeries::t(&ctx, 32).power(2).unwrap();
    assert!(is_one(&commutator(&t, &t2).unwrap().value));
    assert!(matches!(
        commutator(&t, &SkewLaurentSeries::zero(&ctx, 32)),
        Err(Error::Domain(_))
    ));
}

#[test]
fn product_examples() {
    let ctx = shift();
    let t = SkewLaurentSeries::t(&ctx, 32);
    let t2 = t.power(2).unwrap();
    let u = series(&ctx, "u", 32);
    let a = commutator(&t, &u).unwrap();
    assert_eq!(commutator_product(std::slice::from_ref(&a)).unwrap(), a.value);
    let back = commutator(&u, &t).unwrap();
    assert!(is_one(&commutator_product(&[a.clone(), back]).unwrap()));
    let b = commutator(&t2, &u).unwrap();
    let p = commutator_product(&[a, b]).unwrap();
    assert_eq!(p.valuation(), Valuation::Finite(0));
    assert_eq!(p.terms().count(), 1);
    assert_eq!(p.leading_coeff().unwrap(), &fv(&ctx, "(u+1)/u*(u+2)/u"));
    assert!(matches!(commutator_product(&[]), Err(Error::Usage(_))));
}

#[test]
fn kernel_examples() {
    let ctx = shift();
    assert!(!kernel_check(&SkewLaurentSeries::t(&ctx, 32)).unwrap());
    assert!(matches!(kernel_check(&SkewLaurentSeries::zero(&ctx, 32)), Err(Error::Domain(_))));
    let profile = SeriesProfile::with_precision(16);
    let recs: Vec<CommutatorRecord> = (0..4)
        .map(|i| {
            let x = random_series(&ctx, derive_seed(7, 1, i), &profile);
            let y = random_series(&ctx, derive_seed(7, 2, i), &profile);
            commutator(&x, &y).unwrap()
        })
        .collect();
    assert!(kernel_check(&commutator_product(&recs).unwrap()).unwrap());
}

#[test]
fn centre_examples() {
    let ctx = f4();
    let probes = standard_probes(&ctx, 32, 200, 42);
    assert_eq!(probes.len(), 202);
    let t = SkewLaurentSeries::t(&ctx, 32);
    let t2 = t.power(2).unwrap();
    let rep = centre_check(&t2, &probes).unwrap();
    assert!(rep.is_central());
    assert_eq!(rep.probe_count, 202);
    assert!(rep.witness.is_none());
    let rep = centre_check(&t, &probes).unwrap();
    assert_eq!(rep.verdict, CentreVerdict::NonCentral);
    let (idx, w) = rep.witness.unwrap();
    assert_eq!(idx, 1);
    assert_eq!(w.to_string(), "w*t^0 + O(t^32)");

    let ctx = shift();
    let probes = standard_probes(&ctx, 32, 20, 42);
    for k in 1..=4 {
        let tk = SkewLaurentSeries::t(&ctx, 32).power(k).unwrap();
        let rep = centre_check(&tk, &probes).unwrap();
        assert!(!rep.is_central());
        assert_eq!(rep.witness.unwrap().1.to_string(), "u*t^0 + O(t^32)");
    }
    let c = SkewLaurentSeries::constant(&ctx, fv(&ctx, "5/7"), 32);
    assert!(centre_check(&c, &probes).unwrap().is_central());
}

#[test]
fn random_series_examples() {
    let ctx = shift();
    let p = SeriesProfile::default();
    assert_eq!(random_series(&ctx, 42, &p), random_series(&ctx, 42, &p));
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        let s = random_series_with(&ctx, &mut rng, &p);
        let v = s.valuation().finite().expect("nonzero draw");
        assert!((-3..=3).contains(&v));
        assert_eq!(s.precision(), 32);
    }
}

#[test]
fn commutators_match_oracle() {
    for case in oracle()["commutators"].as_array().unwrap() {
        let ctx = oracle_context(case["context"].as_str().unwrap());
        let x = oracle_series(&ctx, &case["x"]);
        let y = oracle_series(&ctx, &case["y"]);
        let expected = oracle_series(&ctx, &case["expected"]);
        assert_eq!(commutator(&x, &y).unwrap().value, expected, "{case}");
    }
}

fn contexts() -> Vec<Arc<SkewContext>> {
    vec![shift(), f4(), skewlab::cli::build_context("q-u", Some("scale:3")).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn commutators_have_valuation_zero(ci in 0usize..3, s in any::<[u64; 2]>()) {
        let ctx = &contexts()[ci];
        let p = SeriesProfile::with_precision(12);
        let rec = commutator(&random_series(ctx, s[0], &p), &random_series(ctx, s[1], &p)).unwrap();
        prop_assert_eq!(rec.valuation_of_value, Valuation::Finite(0));
    }

    #[test]
    fn identity_laws_and_inversion(ci in 0usize..3, s in any::<[u64; 3]>()) {
        let ctx = &contexts()[ci];
        let p = SeriesProfile::with_precision(12);
        let x = random_series(ctx, s[0], &p);
        let y = random_series(ctx, s[1], &p);
        prop_assert!(is_one(&commutator(&x, &x).unwrap().value));
        prop_assert!(is_one(&commutator(&x, &SkewLaurentSeries::one(ctx, 12)).unwrap().value));
        let mut rng = ChaCha8Rng::seed_from_u64(s[2]);
        let mut c = random_fixed_scalar(ctx, &mut rng);
        if c.is_zero() {
            c = ctx.one();
        }
        prop_assert!(ctx.is_fixed(&c));
        let cs = SkewLaurentSeries::constant(ctx, c, 12);
        prop_assert!(is_one(&commutator(&x, &cs).unwrap().value));
        let xy = commutator(&x, &y).unwrap().value;
        let yx = commutator(&y, &x).unwrap().value;
        prop_assert!(yx.equals_to_precision(&xy.inverse().unwrap()));
    }

    #[test]
    fn products_have_valuation_zero(ci in 0usize..3, s in any::<[u64; 8]>(), len in 1usize..=4) {
        let ctx = &contexts()[ci];
        let p = SeriesProfile::with_precision(10);
        let recs: Vec<CommutatorRecord> = (0..len)
            .map(|i| commutator(&random_series(ctx, s[2 * i], &p), &random_series(ctx, s[2 * i + 1], &p)).unwrap())
            .collect();
        prop_assert_eq!(commutator_product(&recs).unwrap().valuation(), Valuation::Finite(0));
    }
}
