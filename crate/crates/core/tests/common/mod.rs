#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;
use skewlab::cli::{build_context, eval_str};
use skewlab::exactfield::{FieldValue, RationalFunction, SkewContext, UniPolynomial};
use skewlab::skewseries::SkewLaurentSeries;

pub fn shift() -> Arc<SkewContext> {
    SkewContext::shift(1).unwrap()
}

pub fn f4() -> Arc<SkewContext> {
    SkewContext::frobenius_f4()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Field element from expression text such as `(u+1)/u` or `w+1`.
pub fn fv(ctx: &Arc<SkewContext>, text: &str) -> FieldValue {
    eval_str(text, ctx, 1).unwrap().coeff(0).unwrap()
}

pub fn series(ctx: &Arc<SkewContext>, text: &str, prec: i64) -> SkewLaurentSeries {
    eval_str(text, ctx, prec).unwrap()
}

pub fn ratfunc(num: &[i64], den: &[i64]) -> FieldValue {
    let p = |c: &[i64]| UniPolynomial::new(c.iter().map(|&x| q(x, 1)).collect());
    FieldValue::RatFunc(RationalFunction::from_polys(&p(num), &p(den)).unwrap())
}

/// Frozen reference data produced by `tests/oracle/twisted_oracle.py`.
pub fn oracle() -> Value {
    serde_json::from_str(include_str!("../data/oracle.json")).unwrap()
}

pub fn oracle_context(name: &str) -> Arc<SkewContext> {
    match name {
        "q-u shift:1" => build_context("q-u", Some("shift:1")).unwrap(),
        "q-u scale:2" => build_context("q-u", Some("scale:2")).unwrap(),
        "gf:2:2:1,1,1" => build_context("gf:2:2:1,1,1", Some("frobenius")).unwrap(),
        other => panic!("unknown oracle context {other}"),
    }
}

pub fn oracle_series(ctx: &Arc<SkewContext>, v: &Value) -> SkewLaurentSeries {
    let prec = v["prec"].as_i64().unwrap();
    let terms: Vec<(i64, FieldValue)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t[0].as_i64().unwrap(), fv(ctx, t[1].as_str().unwrap())))
        .collect();
    SkewLaurentSeries::from_terms(ctx, &terms, prec).unwrap()
}

pub mod span_family {
    use std::sync::Arc;

    use num_rational::BigRational;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use skewlab::exactfield::{FieldValue, SkewContext};
    use skewlab::grouplab::atom_pool;
    use skewlab::skewseries::SkewLaurentSeries;
    use skewlab::spanlab::SpanProblem;

    use super::q;

    /// Rational coefficient grid searched by the brute-force oracle.
    pub fn grid() -> Vec<BigRational> {
        vec![q(-2, 1), q(-1, 1), q(-1, 2), q(0, 1), q(1, 2), q(1, 1), q(2, 1)]
    }

    fn sparse(ctx: &Arc<SkewContext>, rng: &mut ChaCha8Rng, prec: i64) -> SkewLaurentSeries {
        let pool = atom_pool(ctx);
        let n = rng.gen_range(1..=3);
        let mut exps: Vec<i64> = (-1..prec).collect();
        exps.shuffle(rng);
        let terms: Vec<(i64, FieldValue)> = exps[..n]
            .iter()
            .map(|&k| (k, pool.choose(rng).unwrap().clone()))
            .collect();
        SkewLaurentSeries::from_terms(ctx, &terms, prec).unwrap()
    }

    fn combine(ctx: &Arc<SkewContext>, gens: &[SkewLaurentSeries], cs: &[BigRational], prec: i64) -> SkewLaurentSeries {
        let mut acc = SkewLaurentSeries::zero(ctx, prec);
        for (g, c) in gens.iter().zip(cs) {
            let c = ctx.from_rational(c).unwrap();
            acc = acc.add(&g.scale_left(&c).unwrap()).unwrap();
        }
        acc
    }

    /// Deterministic family of small problems over `Q(u)` with `u -> u+1`:
    /// 1 to 3 sparse generators with atom coefficients, precision 2 to 6.
    /// Even-indexed targets are grid combinations of the generators (so
    /// the oracle succeeds); odd-indexed targets are independent draws.
    pub fn problems(ctx: &Arc<SkewContext>, count: usize) -> Vec<SpanProblem> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
        let g = grid();
        (0..count)
            .map(|i| {
                let prec = rng.gen_range(2..=6);
                let n = rng.gen_range(1..=3);
                let gens: Vec<SkewLaurentSeries> = (0..n).map(|_| sparse(ctx, &mut rng, prec)).collect();
                let target = if i % 2 == 0 {
                    let cs: Vec<BigRational> = (0..n).map(|_| g.choose(&mut rng).unwrap().clone()).collect();
                    combine(ctx, &gens, &cs, prec)
                } else {
                    sparse(ctx, &mut rng, prec)
                };
                SpanProblem::new(target, gens, prec).unwrap()
            })
            .collect()
    }

    /// Exhaustive search of `grid()^n` for `target = sum c_i g_i` at the
    /// problem's precision.
    pub fn grid_oracle(p: &SpanProblem) -> Option<Vec<BigRational>> {
        let ctx = p.context();
        let g = grid();
        let n = p.generators.len();
        let prec = p.effective_precision();
        let target = p.target.truncate(prec.min(p.target.precision())).unwrap();
        let mut idx = vec![0usize; n];
        loop {
            let cs: Vec<BigRational> = idx.iter().map(|&k| g[k].clone()).collect();
            let sum = combine(ctx, &p.generators, &cs, prec);
            if sum.sub(&target).unwrap().is_zero() {
                return Some(cs);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return None;
                }
                idx[pos] += 1;
                if idx[pos] < g.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Random well-formed expression trees for parser round trips.
pub mod exprs {
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use skewlab::cli::{Expr, Symbol};

    fn gen(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        let b = Box::new;
        if depth == 0 || rng.gen_bool(0.25) {
            return match rng.gen_range(0..4) {
                0 => Expr::Int(BigInt::from(rng.gen_range(0..40u32))),
                1 => Expr::Sym(Symbol::U),
                2 => Expr::Sym(Symbol::W),
                _ => Expr::Sym(Symbol::T),
            };
        }
        let d = depth - 1;
        match rng.gen_range(0..8) {
            0 => Expr::Neg(b(gen(rng, d))),
            1 => Expr::Add(b(gen(rng, d)), b(gen(rng, d))),
            2 => Expr::Sub(b(gen(rng, d)), b(gen(rng, d))),
            3 => Expr::Mul(b(gen(rng, d)), b(gen(rng, d))),
            4 => Expr::Div(b(gen(rng, d)), b(gen(rng, d))),
            5 => Expr::Pow(b(gen(rng, d)), rng.gen_range(-4..=4)),
            6 => Expr::Comm(b(gen(rng, d)), b(gen(rng, d))),
            _ => Expr::Inv(b(gen(rng, d))),
        }
    }

    pub fn generate(seed: u64, count: usize) -> Vec<Expr> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let e = gen(&mut rng, 5);
                if rng.gen_bool(0.2) {
                    Expr::Truncated(Box::new(e), rng.gen_range(-3..40))
                } else {
                    e
                }
            })
            .collect()
    }
}
