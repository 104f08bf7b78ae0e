//! `--field` / `--sigma` strings.
//!
//! ```text
//! --field q | q-u | gf:p:k:c0,c1,...,ck     (modulus coefficients low to high)
//! --sigma identity | shift:c | scale:c | frobenius
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactfield::{Automorphism, FieldKind, GaloisField, SkewContext};

pub fn parse_field(spec: &str) -> Result<FieldKind> {
    let spec = spec.trim();
    match spec.to_ascii_lowercase().as_str() {
        "q" => return Ok(FieldKind::Rationals),
        "q-u" | "q(u)" => return Ok(FieldKind::RationalFunctions),
        _ => {}
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 || !parts[0].eq_ignore_ascii_case("gf") {
        return Err(Error::usage(format!(
            "unknown field {spec:?}; expected q, q-u or gf:p:k:c0,...,ck"
        )));
    }
    let p: u64 = parts[1]
        .parse()
        .map_err(|_| Error::usage(format!("bad characteristic {:?}", parts[1])))?;
    let k: usize = parts[2]
        .parse()
        .map_err(|_| Error::usage(format!("bad extension degree {:?}", parts[2])))?;
    let coeffs = parts[3]
        .split(',')
        .map(|c| c.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<u64>, _>>()
        .map_err(|_| Error::usage(format!("bad modulus coefficients {:?}", parts[3])))?;
    if coeffs.len() != k + 1 {
        return Err(Error::usage(format!(
            "degree {k} needs {} modulus coefficients, got {}",
            k + 1,
            coeffs.len()
        )));
    }
    if coeffs[k] % p.max(1) == 0 {
        return Err(Error::usage("leading modulus coefficient vanishes mod p"));
    }
    let field = GaloisField::new(p, &coeffs)?;
    if field.degree() != k {
        return Err(Error::usage("modulus degree does not match k"));
    }
    Ok(FieldKind::galois(field))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::usage(format!("bad rational parameter {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_sigma(spec: &str) -> Result<Automorphism> {
    let spec = spec.trim();
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    match (name.to_ascii_lowercase().as_str(), arg) {
        ("identity" | "id", None) => Ok(Automorphism::Identity),
        ("frobenius" | "frob", None) => Ok(Automorphism::Frobenius),
        ("shift", Some(c)) => Ok(Automorphism::Shift(parse_rational(c)?)),
        ("scale", Some(c)) => Ok(Automorphism::Scale(parse_rational(c)?)),
        _ => Err(Error::usage(format!(
            "unknown automorphism {spec:?}; expected identity, shift:c, scale:c or frobenius"
        ))),
    }
}

/// Builds a context; without `--sigma` the default is `shift:1` on `Q(u)`,
/// the Frobenius on `F_{p^k}` and the identity on `Q`.
pub fn build_context(field: &str, sigma: Option<&str>) -> Result<Arc<SkewContext>> {
    let field = parse_field(field)?;
    let sigma = match sigma {
        Some(s) => parse_sigma(s)?,
        None => match field {
            FieldKind::Rationals => Automorphism::Identity,
            FieldKind::RationalFunctions => Automorphism::Shift(BigRational::from_integer(1.into())),
            FieldKind::Galois(_) => Automorphism::Frobenius,
        },
    };
    SkewContext::new(field, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_contexts() {
        assert_eq!(build_context("q-u", Some("shift:1")).unwrap(), SkewContext::shift(1).unwrap());
        assert_eq!(
            build_context("gf:2:2:1,1,1", Some("frobenius")).unwrap(),
            SkewContext::frobenius_f4()
        );
        assert_eq!(build_context("gf:2:2:1,1,1", None).unwrap(), SkewContext::frobenius_f4());
        let c = build_context("q-u", Some("scale:-1/2")).unwrap();
        assert_eq!(c.sigma().to_string(), "scale:-1/2");
    }

    #[test]
    fn rejects_bad_config() {
        for (f, s) in [
            ("gf:2:2:1,0,1", None),
            ("gf:4:1:1,1", None),
            ("gf:2:2:1,1", None),
            ("gf:2:2:1,1,0", None),
            ("r", None),
            ("q-u", Some("frobenius")),
            ("gf:2:2:1,1,1", Some("shift:1")),
            ("q-u", Some("shift:0")),
            ("q-u", Some("shift:1/0")),
            ("q-u", Some("twist")),
        ] {
            assert!(matches!(build_context(f, s), Err(Error::Usage(_))), "{f} {s:?}");
        }
    }
}
